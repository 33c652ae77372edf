#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ktchart/sampling.hpp"
#include "ktchart/svdd.hpp"
#include "ktchart/window.hpp"

namespace ktchart {

struct ChartLimits {
  double ucl = 0.0;
  double center_line = 0.0;
  double lcl = 0.0;
  std::optional<double> uwl;
  std::optional<double> lwl;

  friend bool operator==(const ChartLimits&, const ChartLimits&) = default;
};

enum class AStatus { in_control, out_of_control };
enum class R2Status { in_control, warning_high, warning_low, out_high, out_low };

std::string_view to_string(AStatus status) noexcept;
std::string_view to_string(R2Status status) noexcept;
AStatus parse_a_status(std::string_view text);
R2Status parse_r2_status(std::string_view text);

/// Out of control when dist^2 lies beyond the center model's boundary band
/// above the UCL.
AStatus evaluate_a_status(double center_dist, const ChartLimits& a_chart) noexcept;
/// Control limits take precedence over warning limits.
R2Status evaluate_r2_status(double r_squared, const ChartLimits& r2_chart) noexcept;

struct ChartPoint {
  std::size_t window = 0;
  std::size_t start = 0;
  std::size_t end = 0;
  double r_squared = 0.0;
  double center_dist = 0.0;
  AStatus a_status = AStatus::in_control;
  R2Status r2_status = R2Status::in_control;

  friend bool operator==(const ChartPoint&, const ChartPoint&) = default;
};

struct DispersionStats {
  double mean = 0.0;
  double sigma = 0.0;
  friend bool operator==(const DispersionStats&, const DispersionStats&) = default;
};

/// Mean and sample standard deviation (k - 1 divisor). Throws for k < 2.
DispersionStats dispersion_stats(std::span<const double> r2_values);

struct LimitPair {
  ChartLimits a_chart;
  ChartLimits r2_chart;
};

/// a chart: UCL = R_a^2, CL = R_a^2 / 2, LCL = 0.
/// R^2 chart: mean +/- 3 sigma, optional warnings at +/- 2 sigma; lower
/// limits clamped at zero.
LimitPair compute_limits(double center_r_squared, double r2_mean, double r2_sigma, bool warnings);

struct WindowSummary {
  std::size_t index = 0;
  std::size_t start = 0;
  std::size_t end = 0;
  SvddModel model;
};

struct PhaseIConfig {
  WindowSpec window{500, 150};
  KernelSpec window_kernel = KernelSpec::gaussian(1.0);
  /// Kernel for the model over window centers. Empty selects a gaussian with
  /// the median pairwise distance among the centers.
  std::optional<KernelSpec> center_kernel = KernelSpec::linear();
  double fraction_f = 0.001;
  double center_fraction_f = 0.001;
  SamplingConfig sampling;
  bool warnings = true;
  SolverOptions solver;
};

/// Maps a 1-based window index to its sampling seed.
using WindowSeeder = std::function<std::uint64_t(std::size_t)>;

/// Default seeder: derive_seed(base, index, phase1_window).
WindowSeeder phase1_seeder(std::uint64_t base_seed);

std::vector<WindowSummary> summarize_windows(const ObservationMatrix& data, const WindowSpec& spec,
                                             const KernelSpec& kernel, double outlier_fraction,
                                             const SamplingConfig& sampling,
                                             const SolverOptions& solver = {},
                                             const WindowSeeder& seeder = {});

/// Full train on the k x d matrix of window centers.
SvddModel train_center_model(std::span<const WindowSummary> summaries, const KernelSpec& kernel,
                             double outlier_fraction, const SolverOptions& solver = {});

struct PhaseIModel {
  PhaseIConfig config;
  /// Kernel actually used for the center model.
  KernelSpec center_kernel;
  SvddModel center_model;
  DispersionStats dispersion;
  ChartLimits a_chart;
  ChartLimits r2_chart;
  /// Retained Phase I windows, in index order.
  std::vector<WindowSummary> windows;
};

struct PhaseIResult {
  PhaseIModel model;
  std::vector<ChartPoint> points;
};

/// Summarise every complete window, then build both charts and plot each
/// Phase I window against them.
PhaseIResult phase1(const ObservationMatrix& data, const PhaseIConfig& config,
                    const WindowSeeder& seeder = {});

/// Rebuilds statistics, center model, limits and points from already
/// summarised windows. Needs at least two windows.
PhaseIResult build_charts(PhaseIConfig config, std::vector<WindowSummary> windows);

/// Drops the listed window indices and rebuilds from the survivors without
/// retraining any window.
PhaseIResult prune_and_recompute(const PhaseIModel& model,
                                 std::span<const std::size_t> excluded_windows);

/// Scores one window description against frozen limits.
ChartPoint make_chart_point(const PhaseIModel& model, std::size_t window, WindowBounds bounds,
                            const SvddModel& window_model);

}  // namespace ktchart
