#include "ktchart/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include "ktchart/error.hpp"

namespace ktchart {

std::string format_double(double value) {
  char buffer[32];
  const auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  if (ec != std::errc{}) throw Error("cannot format floating-point value");
  return {buffer, end};
}

namespace {

std::string_view trim(std::string_view text) noexcept {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  return text.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  for (;;) {
    const auto comma = line.find(',', pos);
    fields.push_back(trim(line.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return fields;
}

std::string unquote(std::string_view field) {
  if (field.size() >= 2 && field.front() == '"' && field.back() == '"') field = field.substr(1, field.size() - 2);
  return std::string(field);
}

bool blank(std::string_view line) noexcept { return trim(line).empty(); }

}  // namespace

std::optional<double> parse_double(std::string_view text) noexcept {
  text = trim(text);
  if (text.empty()) return std::nullopt;
  if (text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size() || !std::isfinite(value)) return std::nullopt;
  return value;
}

ObservationReader::ObservationReader(std::istream& in, IngestPolicy policy) : in_(in), policy_(policy) {
  std::string header;
  while (std::getline(in_, header) && blank(header)) ++line_;
  if (blank(header)) throw DataError("observation CSV has no header row");
  for (auto field : split(header)) channels_.push_back(unquote(field));
  if (policy_.expected_dim && *policy_.expected_dim != channels_.size()) {
    throw DataError("observation CSV has " + std::to_string(channels_.size()) + " channels, expected " +
                    std::to_string(*policy_.expected_dim));
  }
}

std::optional<std::vector<double>> ObservationReader::next() {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_;
    if (blank(line)) continue;
    ++summary_.rows_in;

    const auto fields = split(line);
    if (fields.size() > channels_.size()) {
      throw DataError("line " + std::to_string(line_) + " has " + std::to_string(fields.size()) +
                      " fields, header has " + std::to_string(channels_.size()));
    }
    std::vector<double> row;
    row.reserve(channels_.size());
    bool missing = fields.size() < channels_.size();
    bool non_numeric = false;
    for (auto field : fields) {
      if (field.empty()) {
        missing = true;
        continue;
      }
      if (auto v = parse_double(field)) {
        row.push_back(*v);
      } else {
        non_numeric = true;
      }
    }
    if (missing) {
      if (policy_.on_missing == RowPolicy::error) {
        throw DataError("line " + std::to_string(line_) + " has a missing value");
      }
      ++summary_.rows_skipped;
      ++summary_.skipped_missing;
      continue;
    }
    if (non_numeric) {
      if (policy_.on_non_numeric == RowPolicy::error) {
        throw DataError("line " + std::to_string(line_) + " has a non-numeric or non-finite value");
      }
      ++summary_.rows_skipped;
      ++summary_.skipped_non_numeric;
      continue;
    }
    ++summary_.rows_out;
    return row;
  }
  if (in_.bad()) throw IoError("read error while reading observations");
  return std::nullopt;
}

IngestResult read_observations(std::istream& in, const IngestPolicy& policy) {
  ObservationReader reader(in, policy);
  std::vector<double> values;
  std::size_t rows = 0;
  while (auto row = reader.next()) {
    values.insert(values.end(), row->begin(), row->end());
    ++rows;
  }
  if (rows == 0) throw DataError("observation CSV contains no usable rows");
  return {ObservationMatrix(rows, reader.dim(), std::move(values)), reader.channels(), reader.summary()};
}

IngestResult read_observations_file(const std::string& path, const IngestPolicy& policy) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return read_observations(in, policy);
}

void write_observations(std::ostream& out, const ObservationMatrix& data, const std::vector<std::string>& channels) {
  if (!channels.empty() && channels.size() != data.dim()) {
    throw InvalidArgument("channel names do not match the observation dimension");
  }
  for (std::size_t c = 0; c < data.dim(); ++c) {
    if (c > 0) out << ',';
    if (channels.empty()) {
      out << 'x' << (c + 1);
    } else {
      out << channels[c];
    }
  }
  out << '\n';
  for (std::size_t r = 0; r < data.rows(); ++r) {
    const auto row = data.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) out << ',';
      out << format_double(row[c]);
    }
    out << '\n';
  }
}

void write_chart_header(std::ostream& out) { out << kChartCsvHeader << '\n'; }

void write_chart_row(std::ostream& out, const ChartPoint& p) {
  out << p.window << ',' << p.start << ',' << p.end << ',' << format_double(p.r_squared) << ','
      << format_double(p.center_dist) << ',' << to_string(p.a_status) << ',' << to_string(p.r2_status) << '\n';
}

void write_chart(std::ostream& out, const std::vector<ChartPoint>& points) {
  write_chart_header(out);
  for (const auto& p : points) write_chart_row(out, p);
}

namespace {

std::size_t parse_count(std::string_view text, std::size_t line, const char* field) {
  std::size_t value = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size()) {
    throw DataError("chart line " + std::to_string(line) + ": bad " + field);
  }
  return value;
}

}  // namespace

std::vector<ChartPoint> read_chart(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != kChartCsvHeader) {
    throw DataError(std::string("chart CSV must start with the header '") + kChartCsvHeader + "'");
  }
  std::vector<ChartPoint> points;
  std::size_t number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (blank(line)) continue;
    const auto f = split(line);
    if (f.size() != 7) throw DataError("chart line " + std::to_string(number) + " must have 7 fields");
    ChartPoint p;
    p.window = parse_count(f[0], number, "window_id");
    p.start = parse_count(f[1], number, "start");
    p.end = parse_count(f[2], number, "end");
    const auto r2 = parse_double(f[3]);
    const auto dist = parse_double(f[4]);
    if (!r2 || !dist) throw DataError("chart line " + std::to_string(number) + ": bad statistic");
    p.r_squared = *r2;
    p.center_dist = *dist;
    try {
      p.a_status = parse_a_status(f[5]);
      p.r2_status = parse_r2_status(f[6]);
    } catch (const InvalidArgument& e) {
      throw DataError("chart line " + std::to_string(number) + ": " + e.what());
    }
    points.push_back(p);
  }
  return points;
}

void write_boundaries(std::ostream& out, const std::vector<std::size_t>& boundaries) {
  for (std::size_t b : boundaries) out << b << '\n';
}

}  // namespace ktchart
