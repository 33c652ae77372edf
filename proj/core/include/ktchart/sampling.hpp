#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <vector>

#include "ktchart/svdd.hpp"

namespace ktchart {

struct SamplingConfig {
  /// Zero selects d + 1.
  std::size_t sample_size = 0;
  /// Zero selects max(1000, 10 * resolved patience).
  std::size_t max_iterations = 0;
  double eps_r = 1e-4;
  double eps_a = 1e-4;
  /// Consecutive settled iterations required. Zero selects
  /// ceil(3 * rows / sample_size), about three expected draws of every row.
  std::size_t patience = 0;
  std::uint64_t rng_seed = 0;

  std::size_t resolved_sample_size(std::size_t dim) const noexcept {
    return sample_size == 0 ? dim + 1 : sample_size;
  }
  std::size_t resolved_patience(std::size_t rows, std::size_t dim) const noexcept;
  std::size_t resolved_max_iterations(std::size_t rows, std::size_t dim) const noexcept;
  /// Throws InvalidArgument when a field is out of range for data of `dim` columns.
  void validate(std::size_t dim) const;
};

struct SamplingStep {
  std::size_t iteration = 0;
  double r_squared = 0.0;
  std::vector<double> center;
  std::size_t master_size = 0;
};

struct SamplingTrace {
  /// Master state after Step 1 (the S_0 description).
  double initial_r_squared = 0.0;
  std::vector<SamplingStep> steps;
  bool converged = false;
  std::size_t iterations_used = 0;
};

struct SampledModel {
  SvddModel model;
  SamplingTrace trace;
};

using SamplingRng = std::mt19937_64;

/// `size` rows drawn uniformly with replacement.
ObservationMatrix draw_sample(const ObservationMatrix& data, std::size_t size, SamplingRng& rng);

/// Copy of `data` with exact duplicate rows removed; first occurrences keep their order.
ObservationMatrix unique_rows(const ObservationMatrix& data);

/// Iterative sampling trainer: seed a master support set from one sample,
/// then repeatedly merge in the support vectors of a fresh sample and
/// retrain on the union until R^2 and the center settle.
SampledModel train_sampled(const ObservationMatrix& data, const KernelSpec& kernel,
                           double outlier_fraction, const SamplingConfig& config,
                           const SolverOptions& solver = {});

/// CSV: iteration,r_squared,master_size,center_0..center_{d-1}
void write_trace_csv(std::ostream& out, const SamplingTrace& trace);

}  // namespace ktchart
