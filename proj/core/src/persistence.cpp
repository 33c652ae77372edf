#include "ktchart/persistence.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ktchart/csv.hpp"
#include "ktchart/error.hpp"

namespace ktchart {

namespace {

constexpr const char* kSvddTag = "ktchart-svdd";
constexpr const char* kPhase1Tag = "ktchart-phase1";

// One "key value..." record per line.
class RecordReader {
 public:
  explicit RecordReader(std::istream& in) : in_(in) {}

  std::vector<std::string> expect(const std::string& key) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_;
      std::istringstream fields(line);
      std::vector<std::string> tokens;
      for (std::string t; fields >> t;) tokens.push_back(std::move(t));
      if (tokens.empty()) continue;
      if (tokens.front() != key) {
        throw FormatError(key, "expected on line " + std::to_string(line_) + ", found '" + tokens.front() + "'");
      }
      tokens.erase(tokens.begin());
      return tokens;
    }
    throw FormatError(key, "unexpected end of file (truncated model?)");
  }

  std::vector<std::string> expect(const std::string& key, std::size_t count) {
    auto tokens = expect(key);
    if (tokens.size() != count) {
      throw FormatError(key, "expected " + std::to_string(count) + " values on line " + std::to_string(line_) +
                                 ", found " + std::to_string(tokens.size()));
    }
    return tokens;
  }

  double real(const std::string& key) { return to_real(key, expect(key, 1).front()); }
  std::size_t count(const std::string& key) { return to_count(key, expect(key, 1).front()); }
  bool flag(const std::string& key) {
    const auto v = count(key);
    if (v > 1) throw FormatError(key, "flag must be 0 or 1");
    return v == 1;
  }

  static double to_real(const std::string& key, const std::string& text) {
    const auto v = parse_double(text);
    if (!v) throw FormatError(key, "'" + text + "' is not a finite number");
    return *v;
  }

  static std::optional<double> to_optional_real(const std::string& key, const std::string& text) {
    if (text == "-") return std::nullopt;
    return to_real(key, text);
  }

  template <typename Int = std::size_t>
  static Int to_count(const std::string& key, const std::string& text) {
    Int value{};
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || end != text.data() + text.size()) {
      throw FormatError(key, "'" + text + "' is not a non-negative integer");
    }
    return value;
  }

 private:
  std::istream& in_;
  std::size_t line_ = 0;
};

void check_header(RecordReader& reader, const char* tag) {
  const auto version = reader.expect(tag, 1);
  if (RecordReader::to_count<int>(tag, version.front()) != kModelFormatVersion) {
    throw FormatError("version", "unsupported " + std::string(tag) + " format version " + version.front() +
                                     " (this build reads " + std::to_string(kModelFormatVersion) + ")");
  }
}

std::string optional_text(const std::optional<double>& v) { return v ? format_double(*v) : std::string("-"); }

void write_kernel(std::ostream& out, const char* key, const KernelSpec& k) {
  out << key << ' ' << to_string(k.kind()) << ' ' << format_double(k.bandwidth()) << '\n';
}

KernelSpec read_kernel(RecordReader& reader, const std::string& key) {
  const auto t = reader.expect(key, 2);
  try {
    const KernelKind kind = parse_kernel_kind(t[0]);
    return kind == KernelKind::linear ? KernelSpec::linear()
                                      : KernelSpec::gaussian(RecordReader::to_real(key, t[1]));
  } catch (const InvalidArgument& e) {
    throw FormatError(key, e.what());
  }
}

void write_limits(std::ostream& out, const char* key, const ChartLimits& l) {
  out << key << ' ' << format_double(l.ucl) << ' ' << format_double(l.center_line) << ' ' << format_double(l.lcl)
      << ' ' << optional_text(l.uwl) << ' ' << optional_text(l.lwl) << '\n';
}

ChartLimits read_limits(RecordReader& reader, const std::string& key) {
  const auto t = reader.expect(key, 5);
  ChartLimits l;
  l.ucl = RecordReader::to_real(key, t[0]);
  l.center_line = RecordReader::to_real(key, t[1]);
  l.lcl = RecordReader::to_real(key, t[2]);
  l.uwl = RecordReader::to_optional_real(key, t[3]);
  l.lwl = RecordReader::to_optional_real(key, t[4]);
  if (!(l.lcl <= l.center_line && l.center_line <= l.ucl)) throw FormatError(key, "limits out of order");
  return l;
}

void write_svdd(std::ostream& out, const SvddModel& m) {
  out << kSvddTag << ' ' << kModelFormatVersion << '\n';
  write_kernel(out, "kernel", m.kernel());
  out << "fraction_f " << format_double(m.params().outlier_fraction) << '\n';
  out << "penalty_c " << format_double(m.params().penalty) << '\n';
  out << "dimension " << m.dim() << '\n';
  out << "support_vectors " << m.support_count() << '\n';
  out << "r_squared " << format_double(m.r_squared()) << '\n';
  out << "offset_w " << format_double(m.offset()) << '\n';
  out << "threshold_fallback " << (m.threshold_fallback() ? 1 : 0) << '\n';
  out << "center";
  for (double v : m.center()) out << ' ' << format_double(v);
  out << '\n';
  for (std::size_t i = 0; i < m.support_count(); ++i) {
    out << "sv " << format_double(m.alphas()[i]);
    for (double v : m.support_vectors().row(i)) out << ' ' << format_double(v);
    out << '\n';
  }
  out << "end " << kSvddTag << '\n';
}

SvddModel read_svdd(RecordReader& reader) {
  check_header(reader, kSvddTag);
  const KernelSpec kernel = read_kernel(reader, "kernel");
  SvddParams params;
  params.outlier_fraction = reader.real("fraction_f");
  params.penalty = reader.real("penalty_c");
  const std::size_t dim = reader.count("dimension");
  const std::size_t n = reader.count("support_vectors");
  if (dim == 0) throw FormatError("dimension", "must be positive");
  if (n == 0) throw FormatError("support_vectors", "must be positive");
  const double r_squared = reader.real("r_squared");
  const double offset = reader.real("offset_w");
  const bool fallback = reader.flag("threshold_fallback");

  std::vector<double> center;
  for (const auto& t : reader.expect("center", dim)) center.push_back(RecordReader::to_real("center", t));

  std::vector<double> alphas;
  std::vector<double> values;
  alphas.reserve(n);
  values.reserve(n * dim);
  for (std::size_t i = 0; i < n; ++i) {
    const auto t = reader.expect("sv", dim + 1);
    alphas.push_back(RecordReader::to_real("sv", t[0]));
    for (std::size_t c = 0; c < dim; ++c) values.push_back(RecordReader::to_real("sv", t[c + 1]));
  }
  if (reader.expect("end", 1).front() != kSvddTag) throw FormatError("end", "section terminator mismatch");

  try {
    return SvddModel::restore(ObservationMatrix(n, dim, std::move(values)), std::move(alphas), kernel, params,
                              r_squared, offset, std::move(center), fallback);
  } catch (const InvalidArgument& e) {
    throw FormatError("support_vectors", e.what());
  }
}

}  // namespace

void save_svdd_model(std::ostream& out, const SvddModel& model) { write_svdd(out, model); }

SvddModel load_svdd_model(std::istream& in) {
  RecordReader reader(in);
  return read_svdd(reader);
}

void save_phase1_model(std::ostream& out, const PhaseIModel& m) {
  const PhaseIConfig& c = m.config;
  out << kPhase1Tag << ' ' << kModelFormatVersion << '\n';
  out << "window " << c.window.length() << ' ' << c.window.overlap() << '\n';
  out << "fraction_f " << format_double(c.fraction_f) << '\n';
  out << "center_fraction_f " << format_double(c.center_fraction_f) << '\n';
  write_kernel(out, "window_kernel", c.window_kernel);
  write_kernel(out, "center_kernel", m.center_kernel);
  out << "center_kernel_auto " << (c.center_kernel ? 0 : 1) << '\n';
  out << "warnings " << (c.warnings ? 1 : 0) << '\n';
  out << "sampling " << c.sampling.sample_size << ' ' << c.sampling.max_iterations << ' '
      << format_double(c.sampling.eps_r) << ' ' << format_double(c.sampling.eps_a) << ' ' << c.sampling.patience
      << ' ' << c.sampling.rng_seed << '\n';
  out << "solver " << format_double(c.solver.tolerance) << ' ' << c.solver.max_iterations << ' '
      << (c.solver.polish ? 1 : 0) << '\n';
  out << "r2_mean " << format_double(m.dispersion.mean) << '\n';
  out << "r2_sigma " << format_double(m.dispersion.sigma) << '\n';
  write_limits(out, "a_chart", m.a_chart);
  write_limits(out, "r2_chart", m.r2_chart);
  out << "center_model\n";
  write_svdd(out, m.center_model);
  out << "windows " << m.windows.size() << '\n';
  for (const auto& w : m.windows) {
    out << "window_summary " << w.index << ' ' << w.start << ' ' << w.end << '\n';
    write_svdd(out, w.model);
  }
  out << "end " << kPhase1Tag << '\n';
}

PhaseIModel load_phase1_model(std::istream& in) {
  RecordReader reader(in);
  check_header(reader, kPhase1Tag);

  const auto w = reader.expect("window", 2);
  std::optional<WindowSpec> window;
  try {
    window.emplace(RecordReader::to_count("window", w[0]), RecordReader::to_count("window", w[1]));
  } catch (const InvalidArgument& e) {
    throw FormatError("window", e.what());
  }

  PhaseIConfig config;
  config.window = *window;
  config.fraction_f = reader.real("fraction_f");
  config.center_fraction_f = reader.real("center_fraction_f");
  config.window_kernel = read_kernel(reader, "window_kernel");
  const KernelSpec center_kernel = read_kernel(reader, "center_kernel");
  if (!reader.flag("center_kernel_auto")) config.center_kernel = center_kernel;
  config.warnings = reader.flag("warnings");

  const auto s = reader.expect("sampling", 6);
  config.sampling.sample_size = RecordReader::to_count("sampling", s[0]);
  config.sampling.max_iterations = RecordReader::to_count("sampling", s[1]);
  config.sampling.eps_r = RecordReader::to_real("sampling", s[2]);
  config.sampling.eps_a = RecordReader::to_real("sampling", s[3]);
  config.sampling.patience = RecordReader::to_count("sampling", s[4]);
  config.sampling.rng_seed = RecordReader::to_count<std::uint64_t>("sampling", s[5]);

  const auto sv = reader.expect("solver", 3);
  config.solver.tolerance = RecordReader::to_real("solver", sv[0]);
  config.solver.max_iterations = RecordReader::to_count("solver", sv[1]);
  config.solver.polish = RecordReader::to_count("solver", sv[2]) != 0;

  DispersionStats dispersion;
  dispersion.mean = reader.real("r2_mean");
  dispersion.sigma = reader.real("r2_sigma");
  const ChartLimits a_chart = read_limits(reader, "a_chart");
  const ChartLimits r2_chart = read_limits(reader, "r2_chart");

  reader.expect("center_model", 0);
  SvddModel center_model = read_svdd(reader);

  const std::size_t k = reader.count("windows");
  std::vector<WindowSummary> windows;
  windows.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    const auto t = reader.expect("window_summary", 3);
    const std::size_t index = RecordReader::to_count("window_summary", t[0]);
    const std::size_t start = RecordReader::to_count("window_summary", t[1]);
    const std::size_t end = RecordReader::to_count("window_summary", t[2]);
    SvddModel model = read_svdd(reader);
    if (model.dim() != center_model.dim()) throw FormatError("window_summary", "dimension mismatch");
    windows.push_back({index, start, end, std::move(model)});
  }
  if (reader.expect("end", 1).front() != kPhase1Tag) throw FormatError("end", "section terminator mismatch");

  return PhaseIModel{std::move(config), center_kernel, std::move(center_model), dispersion,
                     a_chart,           r2_chart,      std::move(windows)};
}

ModelFileKind detect_model_kind(std::istream& in) {
  const auto position = in.tellg();
  std::string tag;
  in >> tag;
  in.clear();
  in.seekg(position);
  if (tag == kSvddTag) return ModelFileKind::svdd;
  if (tag == kPhase1Tag) return ModelFileKind::phase1;
  throw FormatError("format", "unrecognised model file tag '" + tag + "'");
}

namespace {

std::ifstream open_for_read(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return in;
}

template <typename Writer>
void write_file(const std::string& path, Writer&& writer) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  writer(out);
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace

void save_svdd_model_file(const std::string& path, const SvddModel& model) {
  write_file(path, [&](std::ostream& out) { save_svdd_model(out, model); });
}

SvddModel load_svdd_model_file(const std::string& path) {
  auto in = open_for_read(path);
  return load_svdd_model(in);
}

void save_phase1_model_file(const std::string& path, const PhaseIModel& model) {
  write_file(path, [&](std::ostream& out) { save_phase1_model(out, model); });
}

PhaseIModel load_phase1_model_file(const std::string& path) {
  auto in = open_for_read(path);
  return load_phase1_model(in);
}

}  // namespace ktchart
