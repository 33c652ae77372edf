#include "ktchart/chart.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "ktchart/bandwidth.hpp"
#include "ktchart/error.hpp"
#include "ktchart/seed.hpp"

namespace ktchart {

std::string_view to_string(AStatus status) noexcept {
  return status == AStatus::in_control ? "in_control" : "out_of_control";
}

std::string_view to_string(R2Status status) noexcept {
  switch (status) {
    case R2Status::in_control:
      return "in_control";
    case R2Status::warning_high:
      return "warning_high";
    case R2Status::warning_low:
      return "warning_low";
    case R2Status::out_high:
      return "out_high";
    case R2Status::out_low:
      return "out_low";
  }
  return "unknown";
}

AStatus parse_a_status(std::string_view text) {
  if (text == "in_control") return AStatus::in_control;
  if (text == "out_of_control") return AStatus::out_of_control;
  throw InvalidArgument("unknown a-chart status '" + std::string(text) + "'");
}

R2Status parse_r2_status(std::string_view text) {
  for (R2Status s : {R2Status::in_control, R2Status::warning_high, R2Status::warning_low, R2Status::out_high,
                     R2Status::out_low}) {
    if (text == to_string(s)) return s;
  }
  throw InvalidArgument("unknown R^2-chart status '" + std::string(text) + "'");
}

AStatus evaluate_a_status(double center_dist, const ChartLimits& a_chart) noexcept {
  return center_dist > a_chart.ucl + boundary_band(a_chart.ucl) ? AStatus::out_of_control
                                                                 : AStatus::in_control;
}

R2Status evaluate_r2_status(double r_squared, const ChartLimits& r2_chart) noexcept {
  if (r_squared > r2_chart.ucl) return R2Status::out_high;
  if (r_squared < r2_chart.lcl) return R2Status::out_low;
  if (r2_chart.uwl && r_squared > *r2_chart.uwl) return R2Status::warning_high;
  if (r2_chart.lwl && r_squared < *r2_chart.lwl) return R2Status::warning_low;
  return R2Status::in_control;
}

DispersionStats dispersion_stats(std::span<const double> r2_values) {
  if (r2_values.size() < 2) {
    throw InvalidArgument("R^2 dispersion needs at least two windows, got " +
                          std::to_string(r2_values.size()));
  }
  // Welford
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t k = 0;
  for (double v : r2_values) {
    ++k;
    const double delta = v - mean;
    mean += delta / static_cast<double>(k);
    m2 += delta * (v - mean);
  }
  return {mean, std::sqrt(std::max(0.0, m2 / static_cast<double>(k - 1)))};
}

LimitPair compute_limits(double center_r_squared, double r2_mean, double r2_sigma, bool warnings) {
  if (!(r2_sigma >= 0.0)) throw InvalidArgument("R^2 sigma must be non-negative");
  LimitPair limits;
  limits.a_chart.ucl = center_r_squared;
  limits.a_chart.center_line = center_r_squared / 2.0;
  limits.a_chart.lcl = 0.0;

  limits.r2_chart.ucl = r2_mean + 3.0 * r2_sigma;
  limits.r2_chart.center_line = r2_mean;
  limits.r2_chart.lcl = std::max(0.0, r2_mean - 3.0 * r2_sigma);
  if (warnings) {
    limits.r2_chart.uwl = r2_mean + 2.0 * r2_sigma;
    limits.r2_chart.lwl = std::max(0.0, r2_mean - 2.0 * r2_sigma);
  }
  return limits;
}

WindowSeeder phase1_seeder(std::uint64_t base_seed) {
  return [base_seed](std::size_t index) { return derive_seed(base_seed, index, seed_domain::phase1_window); };
}

std::vector<WindowSummary> summarize_windows(const ObservationMatrix& data, const WindowSpec& spec,
                                             const KernelSpec& kernel, double outlier_fraction,
                                             const SamplingConfig& sampling, const SolverOptions& solver,
                                             const WindowSeeder& seeder) {
  const WindowSeeder seed_of = seeder ? seeder : phase1_seeder(sampling.rng_seed);
  const std::size_t k = window_count(data.rows(), spec);
  std::vector<WindowSummary> summaries;
  summaries.reserve(k);
  for (std::size_t i = 1; i <= k; ++i) {
    const WindowBounds b = window_bounds(i, spec);
    SamplingConfig cfg = sampling;
    cfg.rng_seed = seed_of(i);
    SampledModel trained =
        train_sampled(data.slice(b.start - 1, spec.length()), kernel, outlier_fraction, cfg, solver);
    summaries.push_back({i, b.start, b.end, std::move(trained.model)});
  }
  return summaries;
}

namespace {

ObservationMatrix center_matrix(std::span<const WindowSummary> summaries) {
  std::vector<double> values;
  const std::size_t dim = summaries.front().model.dim();
  values.reserve(summaries.size() * dim);
  for (const auto& s : summaries) values.insert(values.end(), s.model.center().begin(), s.model.center().end());
  return {summaries.size(), dim, std::move(values)};
}

}  // namespace

SvddModel train_center_model(std::span<const WindowSummary> summaries, const KernelSpec& kernel,
                             double outlier_fraction, const SolverOptions& solver) {
  if (summaries.size() < 2) throw InvalidArgument("center model needs at least two window centers");
  return train_full(center_matrix(summaries), kernel, outlier_fraction, solver);
}

ChartPoint make_chart_point(const PhaseIModel& model, std::size_t window, WindowBounds bounds,
                            const SvddModel& window_model) {
  ChartPoint point;
  point.window = window;
  point.start = bounds.start;
  point.end = bounds.end;
  point.r_squared = window_model.r_squared();
  point.center_dist = model.center_model.score(window_model.center());
  point.a_status = evaluate_a_status(point.center_dist, model.a_chart);
  point.r2_status = evaluate_r2_status(point.r_squared, model.r2_chart);
  return point;
}

PhaseIResult build_charts(PhaseIConfig config, std::vector<WindowSummary> windows) {
  if (windows.size() < 2) throw InvalidArgument("Phase I needs at least two windows");

  std::vector<double> r2_values;
  r2_values.reserve(windows.size());
  for (const auto& w : windows) r2_values.push_back(w.model.r_squared());
  const DispersionStats dispersion = dispersion_stats(r2_values);

  const KernelSpec center_kernel =
      config.center_kernel ? *config.center_kernel
                           : KernelSpec::gaussian(median_distance_bandwidth(
                                 center_matrix(windows), derive_seed(config.sampling.rng_seed, 0,
                                                                     seed_domain::bandwidth)));
  SvddModel center_model = train_center_model(windows, center_kernel, config.center_fraction_f, config.solver);
  const LimitPair limits =
      compute_limits(center_model.r_squared(), dispersion.mean, dispersion.sigma, config.warnings);

  PhaseIResult result{PhaseIModel{std::move(config), center_kernel, std::move(center_model), dispersion,
                                  limits.a_chart, limits.r2_chart, std::move(windows)},
                      {}};
  result.points.reserve(result.model.windows.size());
  for (const auto& w : result.model.windows) {
    result.points.push_back(make_chart_point(result.model, w.index, {w.start, w.end}, w.model));
  }
  return result;
}

PhaseIResult phase1(const ObservationMatrix& data, const PhaseIConfig& config, const WindowSeeder& seeder) {
  config.sampling.validate(data.dim());
  if (window_count(data.rows(), config.window) < 2) {
    throw InvalidArgument("Phase I data must hold at least two complete windows");
  }
  auto windows = summarize_windows(data, config.window, config.window_kernel, config.fraction_f,
                                   config.sampling, config.solver, seeder);
  return build_charts(config, std::move(windows));
}

PhaseIResult prune_and_recompute(const PhaseIModel& model, std::span<const std::size_t> excluded_windows) {
  const std::set<std::size_t> excluded(excluded_windows.begin(), excluded_windows.end());
  for (std::size_t index : excluded) {
    const bool known = std::any_of(model.windows.begin(), model.windows.end(),
                                   [index](const WindowSummary& w) { return w.index == index; });
    if (!known) throw InvalidArgument("window " + std::to_string(index) + " is not part of the Phase I model");
  }
  std::vector<WindowSummary> survivors;
  for (const auto& w : model.windows) {
    if (!excluded.contains(w.index)) survivors.push_back(w);
  }
  if (survivors.size() < 2) {
    throw InvalidArgument("only " + std::to_string(survivors.size()) +
                          " Phase I windows survive exclusion; at least two are required");
  }
  return build_charts(model.config, std::move(survivors));
}

}  // namespace ktchart
