#include "ktchart/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <string>

#include "ktchart/csv.hpp"
#include "ktchart/error.hpp"

namespace ktchart {

void SamplingConfig::validate(std::size_t dim) const {
  if (resolved_sample_size(dim) < 2) throw InvalidArgument("sample size must be at least 2");
  if (!(eps_r > 0.0) || !(eps_a > 0.0)) throw InvalidArgument("sampling tolerances must be positive");
}

std::size_t SamplingConfig::resolved_patience(std::size_t rows, std::size_t dim) const noexcept {
  if (patience > 0) return patience;
  const std::size_t size = std::max<std::size_t>(resolved_sample_size(dim), 1);
  return std::max<std::size_t>(1, (3 * rows + size - 1) / size);
}

std::size_t SamplingConfig::resolved_max_iterations(std::size_t rows, std::size_t dim) const noexcept {
  if (max_iterations > 0) return max_iterations;
  return std::max<std::size_t>(1000, 10 * resolved_patience(rows, dim));
}

ObservationMatrix draw_sample(const ObservationMatrix& data, std::size_t size, SamplingRng& rng) {
  if (size == 0) throw InvalidArgument("sample size must be at least 1");
  std::uniform_int_distribution<std::size_t> pick(0, data.rows() - 1);
  std::vector<std::size_t> indices(size);
  for (auto& i : indices) i = pick(rng);
  return data.select(indices);
}

ObservationMatrix unique_rows(const ObservationMatrix& data) {
  std::vector<std::size_t> order(data.rows());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto row_less = [&](std::size_t a, std::size_t b) {
    const auto ra = data.row(a);
    const auto rb = data.row(b);
    return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
  };
  std::stable_sort(order.begin(), order.end(), row_less);

  std::vector<std::size_t> keep;
  keep.reserve(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (k == 0 || row_less(order[k - 1], order[k])) keep.push_back(order[k]);
  }
  // stable_sort puts the first occurrence of each group first; restore input order.
  std::sort(keep.begin(), keep.end());
  return data.select(keep);
}

namespace {

double relative_change(double current, double previous) {
  return std::abs(current - previous) / (std::abs(previous) + 1e-12);
}

double relative_movement(std::span<const double> current, std::span<const double> previous) {
  double norm = 0.0;
  for (double v : previous) norm += v * v;
  return std::sqrt(squared_distance(current, previous)) / (std::sqrt(norm) + 1e-12);
}

}  // namespace

SampledModel train_sampled(const ObservationMatrix& data, const KernelSpec& kernel, double outlier_fraction,
                           const SamplingConfig& config, const SolverOptions& solver) {
  config.validate(data.dim());
  const std::size_t sample_size = config.resolved_sample_size(data.dim());
  // Every sub-problem uses the penalty implied by the sample size.
  const SvddParams params = SvddParams::for_count(outlier_fraction, sample_size);

  const std::size_t patience = config.resolved_patience(data.rows(), data.dim());
  const std::size_t max_iterations = config.resolved_max_iterations(data.rows(), data.dim());

  SamplingRng rng(config.rng_seed);
  SvddModel master = train_with_penalty(draw_sample(data, sample_size, rng), kernel, params, solver);

  SamplingTrace trace;
  trace.initial_r_squared = master.r_squared();
  std::size_t streak = 0;
  for (std::size_t iteration = 1; iteration <= max_iterations; ++iteration) {
    const SvddModel local = train_with_penalty(draw_sample(data, sample_size, rng), kernel, params, solver);
    const ObservationMatrix merged = unique_rows(master.support_vectors().concat(local.support_vectors()));
    SvddModel next = train_with_penalty(merged, kernel, params, solver);

    trace.steps.push_back({iteration, next.r_squared(),
                           std::vector<double>(next.center().begin(), next.center().end()),
                           next.support_count()});
    const bool settled = relative_change(next.r_squared(), master.r_squared()) <= config.eps_r &&
                         relative_movement(next.center(), master.center()) <= config.eps_a;
    streak = settled ? streak + 1 : 0;
    master = std::move(next);
    if (streak >= patience) {
      trace.converged = true;
      break;
    }
  }
  trace.iterations_used = trace.steps.size();
  return {std::move(master), std::move(trace)};
}

void write_trace_csv(std::ostream& out, const SamplingTrace& trace) {
  out << "iteration,r_squared,master_size";
  const std::size_t dim = trace.steps.empty() ? 0 : trace.steps.front().center.size();
  for (std::size_t c = 0; c < dim; ++c) out << ",center_" << c;
  out << '\n';
  for (const auto& step : trace.steps) {
    out << step.iteration << ',' << format_double(step.r_squared) << ',' << step.master_size;
    for (double v : step.center) out << ',' << format_double(v);
    out << '\n';
  }
}

}  // namespace ktchart
