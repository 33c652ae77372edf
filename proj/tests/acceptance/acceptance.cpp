// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ktchart/ktchart.hpp"
#include "oracles/dense_qp.hpp"
#include "oracles/meb.hpp"
#include "support.hpp"

using namespace ktchart;
using test_support::Points;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buffer[512];
  std::snprintf(buffer, sizeof buffer, format, args...);
  return buffer;
}

double norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

// Models collected from the other criteria for the coefficient/position check.
std::vector<SvddModel> g_models;

Outcome dual_solver_oracle() {
  std::mt19937_64 rng(1001);
  std::uniform_int_distribution<std::size_t> size(4, 12);
  double worst_objective = 0.0, worst_alpha = 0.0, solver_seconds = 0.0;
  for (int instance = 0; instance < 50; ++instance) {
    const std::size_t p = size(rng);
    const Points pts = test_support::uniform_points(p, 2, 5000 + instance);
    const bool gaussian = instance % 2 == 0;
    const double s = 0.5 + 0.1 * (instance % 10);
    const double choices[] = {1.0 / static_cast<double>(p), 0.3, 1.0};
    const double c = choices[instance % 3];
    const KernelSpec kernel = gaussian ? KernelSpec::gaussian(s) : KernelSpec::linear();

    const auto t0 = Clock::now();
    const ObservationMatrix data = test_support::to_matrix(pts);
    const DualSolution sol = solve_dual(data, kernel, c);
    solver_seconds += seconds_since(t0);

    const auto ref = oracle::projected_gradient(pts, gaussian ? s : 0.0, c);
    const auto k = oracle::gram(pts, gaussian ? s : 0.0);
    worst_objective = std::max(worst_objective, std::abs(oracle::dual_objective(k, sol.alphas) - ref.objective));
    for (std::size_t i = 0; i < p; ++i) worst_alpha = std::max(worst_alpha, std::abs(sol.alphas[i] - ref.alphas[i]));
    g_models.push_back(train_with_penalty(data, kernel, {0.001, c}));
  }
  Outcome o;
  o.pass = worst_objective <= 1e-6 && worst_alpha <= 1e-4 && solver_seconds < 5.0;
  o.detail = fmt("50 instances, max |d objective| = %.2e (<= 1e-6), max |d alpha| = %.2e (<= 1e-4), solver time %.3f s (< 5 s)",
                 worst_objective, worst_alpha, solver_seconds);
  return o;
}

Outcome minimum_enclosing_ball() {
  std::mt19937_64 rng(2002);
  std::uniform_int_distribution<std::size_t> size(2, 50), dims(1, 3);
  double worst_center = 0.0, worst_r2 = 0.0;
  for (int set = 0; set < 100; ++set) {
    const std::size_t p = size(rng), d = dims(rng);
    const Points pts = test_support::uniform_points(p, d, 7000 + set, -5.0, 5.0);
    const auto ball = oracle::minimum_enclosing_ball(pts);
    const SvddModel model = train_with_penalty(test_support::to_matrix(pts), KernelSpec::linear(), {0.001, 1.0});
    worst_center = std::max(worst_center, distance(model.center(), ball.center));
    worst_r2 = std::max(worst_r2, std::abs(model.r_squared() - ball.radius_squared));
    g_models.push_back(model);
  }
  Outcome o;
  o.pass = worst_center <= 1e-6 && worst_r2 <= 1e-6;
  o.detail = fmt("100 point sets, max center error %.2e (<= 1e-6), max |d R^2| %.2e (<= 1e-6)", worst_center, worst_r2);
  return o;
}

Outcome closed_forms() {
  double worst_two = 0.0;
  for (double d : {0.25, 1.0, 2.0, 4.0}) {
    for (double s : {0.5, 1.0, 3.0}) {
      const auto data = ObservationMatrix::from_rows({{0.0, 0.0}, {d, 0.0}});
      const auto model = train_full(data, KernelSpec::gaussian(s), 0.001);
      worst_two = std::max(worst_two, std::abs(model.r_squared() - 0.5 * (1.0 - std::exp(-d * d / (2 * s * s)))));
      g_models.push_back(model);
    }
  }
  const auto square = train_full(ObservationMatrix::from_rows({{0, 0}, {1, 0}, {0, 1}, {1, 1}}),
                                 KernelSpec::linear(), 0.001);
  const double square_error = std::abs(square.r_squared() - 0.5);
  g_models.push_back(square);
  Outcome o;
  o.pass = worst_two <= 1e-9 && square_error <= 1e-9;
  o.detail = fmt("two-point gaussian max error %.2e (<= 1e-9), unit square |R^2 - 0.5| = %.2e (<= 1e-9)", worst_two,
                 square_error);
  return o;
}

SvddModel g_persist_svdd = train_full(ObservationMatrix::from_rows({{0.0}}), KernelSpec::linear(), 0.5);

Outcome sampling_fidelity() {
  double worst_r2 = 0.0, worst_center = 0.0, worst_drop = 0.0;
  bool identical = true;
  int converged = 0;
  for (int set = 0; set < 20; ++set) {
    std::mt19937_64 rng(3000 + set);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::uniform_real_distribution<double> scale(0.5, 2.0);
    SegmentSpec spec{"cloud", 2000, {u(rng), u(rng), u(rng), 3.0}, {scale(rng), scale(rng), scale(rng), scale(rng)},
                     {}, {}, {}};
    const ObservationMatrix data = gen_segment(spec, 4000 + set);
    const KernelSpec kernel = KernelSpec::gaussian(median_distance_bandwidth(data, set));
    const SvddModel full = train_full(data, kernel, 0.001);

    SamplingConfig cfg;
    cfg.rng_seed = 9000 + set;
    const SampledModel a = train_sampled(data, kernel, 0.001, cfg);
    const SampledModel b = train_sampled(data, kernel, 0.001, cfg);

    worst_r2 = std::max(worst_r2, std::abs(a.model.r_squared() - full.r_squared()) / full.r_squared());
    worst_center = std::max(worst_center, distance(a.model.center(), full.center()) / norm(full.center()));
    double previous = a.trace.initial_r_squared;
    for (const auto& step : a.trace.steps) {
      worst_drop = std::max(worst_drop, previous - step.r_squared);
      previous = step.r_squared;
    }
    identical = identical && test_support::vec(a.model.alphas()) == test_support::vec(b.model.alphas()) &&
                a.model.support_vectors() == b.model.support_vectors() &&
                a.model.r_squared() == b.model.r_squared() && a.trace.steps.size() == b.trace.steps.size();
    for (std::size_t t = 0; identical && t < a.trace.steps.size(); ++t) {
      identical = a.trace.steps[t].r_squared == b.trace.steps[t].r_squared &&
                  a.trace.steps[t].center == b.trace.steps[t].center;
    }
    converged += a.trace.converged;
    g_models.push_back(full);
    g_models.push_back(a.model);
    if (set == 0) g_persist_svdd = full;
  }
  Outcome o;
  o.pass = worst_r2 <= 0.05 && worst_center <= 0.05 && worst_drop <= 10 * kDefaultKktTolerance && identical;
  o.detail = fmt("20 sets, max rel |d R^2| %.4f (<= 0.05), max rel center distance %.4f (<= 0.05), max R^2 drop %.1e "
                 "(<= %.0e), reruns bit-identical: %s, converged %d/20",
                 worst_r2, worst_center, std::max(0.0, worst_drop), 10 * kDefaultKktTolerance,
                 identical ? "yes" : "no", converged);
  return o;
}

Outcome window_algebra() {
  const WindowSpec example(10, 3);
  bool ok = window_count(100, example) == 13;
  for (std::size_t i = 1; i < 13; ++i) ok = ok && window_bounds(i, example).end - window_bounds(i + 1, example).start + 1 == 3;

  std::mt19937_64 rng(6006);
  std::size_t cases = 0;
  for (; cases < 2000; ++cases) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 200)(rng);
    const std::size_t m = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    const std::size_t p = std::uniform_int_distribution<std::size_t>(n, 20 * n)(rng);
    const WindowSpec spec(n, m);
    const std::size_t k = window_count(p, spec);
    std::size_t enumerated = 0;
    for (std::size_t start = 1; start + n - 1 <= p; start += n - m) ++enumerated;
    ok = ok && k == enumerated && window_bounds(k, spec).end <= p && window_bounds(k + 1, spec).end > p;
    for (std::size_t i = 1; ok && i < k; ++i) {
      const auto a = window_bounds(i, spec), b = window_bounds(i + 1, spec);
      ok = a.end - a.start + 1 == n && a.end + 1 - b.start == m && b.start == a.start + (n - m);
    }
    if (!ok) break;
  }
  Outcome o;
  o.pass = ok;
  o.detail = fmt("(p=100, n=10, m=3) -> %zu windows with overlap 3; %zu random (p, n, m) cases checked",
                 window_count(100, example), cases);
  return o;
}

Outcome limit_arithmetic() {
  struct Case {
    double ra2, mean, sigma;
  };
  const Case cases[] = {{0.8, 2.0, 1.0}, {0.5, 0.75, 0.125}, {0.25, 0.5, 0.0}, {1.5, 0.375, 0.25}, {0.0, 1.0, 0.5}};
  bool ok = true;
  for (const auto& c : cases) {
    const auto l = compute_limits(c.ra2, c.mean, c.sigma, true);
    ok = ok && l.a_chart.ucl == c.ra2 && l.a_chart.center_line == c.ra2 / 2 && l.a_chart.lcl == 0.0 &&
         !l.a_chart.uwl && !l.a_chart.lwl;
    ok = ok && l.r2_chart.ucl == c.mean + 3 * c.sigma && l.r2_chart.center_line == c.mean &&
         l.r2_chart.lcl == std::max(0.0, c.mean - 3 * c.sigma) && *l.r2_chart.uwl == c.mean + 2 * c.sigma &&
         *l.r2_chart.lwl == std::max(0.0, c.mean - 2 * c.sigma);
  }
  const auto example = compute_limits(0.8, 2.0, 1.0, true);
  ok = ok && example.a_chart.ucl == 0.8 && example.a_chart.center_line == 0.4 && example.r2_chart.ucl == 5.0 &&
       example.r2_chart.lcl == 0.0 && *example.r2_chart.uwl == 4.0 && *example.r2_chart.lwl == 0.0;
  Outcome o;
  o.pass = ok;
  o.detail = fmt("%zu rational cases exact, including clamped lower limits", std::size(cases) + 1);
  return o;
}

std::shared_ptr<const PhaseIModel> g_persist_phase1;
std::vector<ChartPoint> g_phase2_points;
ObservationMatrix g_phase2_data = ObservationMatrix::from_rows({{0.0}});

Outcome detection_reenactment() {
  const auto t0 = Clock::now();
  constexpr std::uint64_t seed = 42;
  constexpr std::size_t d = 4, block = 3500;
  const std::vector<double> zero(d, 0.0), unit(d, 1.0);

  const Stream phase1_stream = compose_stream({SegmentSpec{"normal", 25000, zero, unit, {}, {}, {}}}, seed);
  PhaseIConfig cfg;
  cfg.window = WindowSpec(500, 150);
  cfg.window_kernel = KernelSpec::gaussian(median_distance_bandwidth(phase1_stream.data, seed));
  cfg.fraction_f = 0.001;
  cfg.sampling.sample_size = 5;
  cfg.sampling.rng_seed = seed;
  const PhaseIResult phase1_result = phase1(phase1_stream.data, cfg);
  auto model = std::make_shared<const PhaseIModel>(phase1_result.model);

  auto segment = [&](const char* label, std::optional<FaultSpec> fault) {
    return SegmentSpec{label, block, zero, unit, {}, fault, {}};
  };
  const Stream phase2_stream =
      compose_stream({segment("normal", {}), segment("mean_step", FaultSpec{FaultKind::mean_step, 3.0, 0, {0}}),
                      segment("normal", {}), segment("variance", FaultSpec{FaultKind::variance_scale, 2.0, 0, {}}),
                      segment("normal", {})},
                     seed + 1);

  Phase2Monitor monitor(model);
  std::vector<ChartPoint> points;
  for (std::size_t t = 0; t < phase2_stream.data.rows(); ++t) {
    if (auto p = monitor.push(phase2_stream.data.row(t))) points.push_back(*p);
  }

  // Segment j covers observations j*block+1 .. (j+1)*block.
  auto segment_of = [&](std::size_t observation) { return (observation - 1) / block; };
  std::size_t in_control = 0, false_alarms = 0;
  std::optional<std::size_t> mean_delay, variance_delay;
  for (const auto& p : points) {
    const std::size_t first = segment_of(p.start), last = segment_of(p.end);
    const bool a_signal = p.a_status == AStatus::out_of_control;
    const bool r_signal = p.r2_status == R2Status::out_high || p.r2_status == R2Status::out_low;
    if (first == last && first % 2 == 0) {
      ++in_control;
      false_alarms += a_signal || r_signal;
    }
    // Windows counted from the first one starting at or after the onset.
    for (auto [seg, signal, delay] : {std::tuple{std::size_t{1}, a_signal, &mean_delay},
                                      std::tuple{std::size_t{3}, p.r2_status == R2Status::out_high, &variance_delay}}) {
      const std::size_t onset = seg * block + 1;
      if (p.start >= onset && p.end <= onset + block - 1 && signal && !*delay) {
        *delay = (p.start - onset) / cfg.window.stride() + 1;
      }
    }
  }
  const double seconds = seconds_since(t0);
  const double rate = static_cast<double>(false_alarms) / static_cast<double>(in_control);

  g_models.push_back(model->center_model);
  for (const auto& w : model->windows) g_models.push_back(w.model);
  g_persist_phase1 = model;
  g_phase2_points = points;
  g_phase2_data = phase2_stream.data;

  Outcome o;
  o.pass = rate <= 0.05 && mean_delay && *mean_delay <= 2 && variance_delay && *variance_delay <= 2 && seconds < 60.0;
  o.detail = fmt("%zu Phase I windows, %zu Phase II windows; false alarms %zu/%zu = %.1f%% (<= 5%%); mean step on a "
                 "chart at window %s after onset, variance on R^2 chart at window %s (<= 2); %.1f s (< 60 s)",
                 model->windows.size(), points.size(), false_alarms, in_control, 100 * rate,
                 mean_delay ? std::to_string(*mean_delay).c_str() : "never",
                 variance_delay ? std::to_string(*variance_delay).c_str() : "never", seconds);
  return o;
}

Outcome position_consistency() {
  double worst_boundary = 0.0, worst_interior = 0.0;
  std::size_t boundary_svs = 0;
  for (const auto& m : g_models) {
    const double c = m.params().penalty;
    for (std::size_t i = 0; i < m.support_count(); ++i) {
      const double score = m.score(m.support_vectors().row(i));
      const double a = m.alphas()[i];
      if (a < c && !m.threshold_fallback()) {
        worst_boundary = std::max(worst_boundary, std::abs(score - m.r_squared()));
        ++boundary_svs;
      }
      // A retained coefficient above 1e-8 C on a strictly interior point is a violation.
      if (a > alpha_zero_tolerance(c)) worst_interior = std::max(worst_interior, m.r_squared() - score);
    }
  }
  Outcome o;
  o.pass = worst_boundary <= 1e-5 && worst_interior <= 1e-5;
  o.detail = fmt("%zu models, %zu boundary SVs: max |score - R^2| %.2e (<= 1e-5); deepest SV with alpha > 1e-8 C "
                 "sits %.2e inside (<= 1e-5)",
                 g_models.size(), boundary_svs, worst_boundary, std::max(0.0, worst_interior));
  return o;
}

Outcome persistence_round_trip() {
  std::stringstream svdd_text;
  save_svdd_model(svdd_text, g_persist_svdd);
  const SvddModel svdd = load_svdd_model(svdd_text);
  double worst = 0.0;
  bool statuses = true;
  for (const auto& z : test_support::gaussian_points(1000, 4, 99, 3.0)) {
    worst = std::max(worst, std::abs(svdd.score(z) - g_persist_svdd.score(z)));
    statuses = statuses && svdd.classify(z) == g_persist_svdd.classify(z);
  }

  std::stringstream phase1_text;
  save_phase1_model(phase1_text, *g_persist_phase1);
  auto loaded = std::make_shared<const PhaseIModel>(load_phase1_model(phase1_text));
  Phase2Monitor monitor(loaded);
  std::size_t q = 0;
  for (std::size_t t = 0; t < g_phase2_data.rows(); ++t) {
    if (auto p = monitor.push(g_phase2_data.row(t))) {
      const ChartPoint& ref = g_phase2_points.at(q++);
      worst = std::max({worst, std::abs(p->r_squared - ref.r_squared), std::abs(p->center_dist - ref.center_dist)});
      statuses = statuses && p->a_status == ref.a_status && p->r2_status == ref.r2_status;
    }
  }
  statuses = statuses && q == g_phase2_points.size();
  Outcome o;
  o.pass = worst <= 1e-12 && statuses;
  o.detail = fmt("SVDD model over 1000 probes and Phase I model over %zu Phase II windows: max |d| %.2e (<= 1e-12), "
                 "statuses identical: %s",
                 q, worst, statuses ? "yes" : "no");
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
    Outcome outcome;
  };
  std::vector<Criterion> criteria{
      {1, "dual solver matches dense reference", dual_solver_oracle, {}},
      {2, "linear hard margin equals minimum enclosing ball", minimum_enclosing_ball, {}},
      {4, "closed-form thresholds", closed_forms, {}},
      {5, "sampling trainer fidelity", sampling_fidelity, {}},
      {6, "window algebra", window_algebra, {}},
      {7, "limit arithmetic", limit_arithmetic, {}},
      {8, "end-to-end detection re-enactment", detection_reenactment, {}},
      {3, "coefficient/position consistency", position_consistency, {}},
      {9, "persistence round trip", persistence_round_trip, {}},
  };
  for (auto& c : criteria) {
    try {
      c.outcome = c.run();
    } catch (const std::exception& e) {
      c.outcome = {false, std::string("exception: ") + e.what()};
    }
  }
  std::sort(criteria.begin(), criteria.end(), [](const Criterion& a, const Criterion& b) { return a.id < b.id; });
  int failures = 0;
  for (const auto& c : criteria) {
    std::printf("%s [%d] %s: %s\n", c.outcome.pass ? "PASS" : "FAIL", c.id, c.name, c.outcome.detail.c_str());
    failures += !c.outcome.pass;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
