#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ktchart/observation_matrix.hpp"

namespace ktchart {

enum class FaultKind { mean_step, variance_scale, drift_ramp, correlation_break };

std::string_view to_string(FaultKind kind) noexcept;
FaultKind parse_fault_kind(std::string_view text);

/// Transformation applied to rows at and after `onset` (0-based, within the
/// segment). All magnitudes act on the selected channels, all channels when
/// `channels` is empty.
///
///  - mean_step:         x_c += magnitude * scale_c
///  - variance_scale:    deviation from the mean scaled by sqrt(magnitude),
///                       i.e. the variance is multiplied by `magnitude`
///  - drift_ramp:        x_c += magnitude * scale_c * (t - onset + 1) / (length - onset),
///                       reaching the full shift on the last row
///  - correlation_break: correlation replaced by (1 - w) R + w I, w = magnitude in [0, 1]
struct FaultSpec {
  FaultKind kind = FaultKind::mean_step;
  double magnitude = 0.0;
  std::size_t onset = 0;
  std::vector<std::size_t> channels;
};

/// Two-component mixture: a row comes from the alternate mean with
/// probability `weight`.
struct MixtureSpec {
  double weight = 0.5;
  std::vector<double> alternate_mean;
};

struct SegmentSpec {
  std::string label;
  std::size_t length = 0;
  std::vector<double> mean;
  std::vector<double> scale;
  /// Row-major d x d; symmetric, unit diagonal, positive definite.
  std::optional<std::vector<double>> correlation;
  std::optional<FaultSpec> fault;
  std::optional<MixtureSpec> mixture;

  std::size_t dim() const noexcept { return mean.size(); }
  /// Throws InvalidArgument describing the first violated constraint.
  void validate() const;
};

/// Gaussian (or two-component gaussian mixture) rows with the fault, if any,
/// applied from its onset. Rows before the onset match the fault-free segment
/// drawn with the same seed exactly. Throws InvalidArgument for zero-length
/// segments, which have no matrix representation.
ObservationMatrix gen_segment(const SegmentSpec& spec, std::uint64_t seed);

struct Stream {
  ObservationMatrix data;
  /// 1-based first row of every segment after the first.
  std::vector<std::size_t> boundaries;
  std::vector<std::string> labels;
};

/// Concatenates segments in order; segment j uses derive_seed(seed, j).
Stream compose_stream(const std::vector<SegmentSpec>& segments, std::uint64_t seed);

}  // namespace ktchart
