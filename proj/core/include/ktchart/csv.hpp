#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ktchart/chart.hpp"
#include "ktchart/observation_matrix.hpp"

namespace ktchart {

enum class RowPolicy { error, skip_row };

struct IngestPolicy {
  /// Empty cells or short rows.
  RowPolicy on_missing = RowPolicy::error;
  /// Unparseable cells, NaN and Inf.
  RowPolicy on_non_numeric = RowPolicy::error;
  std::optional<std::size_t> expected_dim;
};

struct IngestSummary {
  std::size_t rows_in = 0;
  std::size_t rows_out = 0;
  std::size_t rows_skipped = 0;
  std::size_t skipped_missing = 0;
  std::size_t skipped_non_numeric = 0;
};

/// Incremental reader for a headered observation CSV. One observation per
/// row; every column is a channel.
class ObservationReader {
 public:
  /// Reads the header. Throws DataError if it is missing or its width
  /// disagrees with `policy.expected_dim`.
  ObservationReader(std::istream& in, IngestPolicy policy);

  const std::vector<std::string>& channels() const noexcept { return channels_; }
  std::size_t dim() const noexcept { return channels_.size(); }

  /// Next accepted row, or nothing at end of input. Throws DataError naming
  /// the line when the policy says error.
  std::optional<std::vector<double>> next();

  const IngestSummary& summary() const noexcept { return summary_; }

 private:
  std::istream& in_;
  IngestPolicy policy_;
  std::vector<std::string> channels_;
  IngestSummary summary_;
  std::size_t line_ = 1;
};

struct IngestResult {
  ObservationMatrix observations;
  std::vector<std::string> channels;
  IngestSummary summary;
};

/// Throws DataError when no rows are accepted.
IngestResult read_observations(std::istream& in, const IngestPolicy& policy = {});
IngestResult read_observations_file(const std::string& path, const IngestPolicy& policy = {});

/// Channel names default to x1..xd.
void write_observations(std::ostream& out, const ObservationMatrix& data,
                        const std::vector<std::string>& channels = {});

inline constexpr const char* kChartCsvHeader =
    "window_id,start,end,r_squared,center_dist,a_status,r2_status";

void write_chart_header(std::ostream& out);
void write_chart_row(std::ostream& out, const ChartPoint& point);
void write_chart(std::ostream& out, const std::vector<ChartPoint>& points);
std::vector<ChartPoint> read_chart(std::istream& in);

void write_boundaries(std::ostream& out, const std::vector<std::size_t>& boundaries);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);
/// Strict full-token parse; nothing on failure.
std::optional<double> parse_double(std::string_view text) noexcept;

}  // namespace ktchart
