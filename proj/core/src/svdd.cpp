#include "ktchart/svdd.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "kernel_matrix.hpp"
#include "ktchart/error.hpp"

namespace ktchart {

SvddParams SvddParams::for_count(double outlier_fraction, std::size_t count) {
  if (!(outlier_fraction > 0.0) || !(outlier_fraction <= 1.0)) {
    throw InvalidArgument("outlier fraction f must lie in (0, 1], got " +
                          std::to_string(outlier_fraction));
  }
  if (count == 0) throw InvalidArgument("cannot derive C for zero observations");
  return {outlier_fraction, 1.0 / (static_cast<double>(count) * outlier_fraction)};
}

namespace {

constexpr std::size_t kMaxPolishSize = 1000;

struct WorkingPair {
  std::size_t up = 0;    // coefficient to raise (smallest gradient, below C)
  std::size_t down = 0;  // coefficient to lower (largest gradient, above 0)
  double gap = 0.0;
};

// Gradient of the minimisation form a'Ka - a'diag(K) is G = 2Ka - diag(K),
// which equals W - dist^2(x_i). The optimality gap is therefore measured in
// squared feature-space distance.
WorkingPair select_pair(std::span<const double> alpha, std::span<const double> grad, double c) {
  double g_max = -std::numeric_limits<double>::infinity();
  double g_min = std::numeric_limits<double>::infinity();
  WorkingPair pair;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (alpha[i] > 0.0 && grad[i] > g_max) {
      g_max = grad[i];
      pair.down = i;
    }
    if (alpha[i] < c && grad[i] < g_min) {
      g_min = grad[i];
      pair.up = i;
    }
  }
  pair.gap = (std::isfinite(g_max) && std::isfinite(g_min)) ? g_max - g_min : 0.0;
  return pair;
}

void compute_gradient(detail::KernelMatrix& k, std::span<const double> alpha, std::vector<double>& grad) {
  const std::size_t n = alpha.size();
  grad.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    if (alpha[j] == 0.0) continue;
    const auto col = k.row(j);
    const double w = 2.0 * alpha[j];
    for (std::size_t i = 0; i < n; ++i) grad[i] += w * col[i];
  }
  for (std::size_t i = 0; i < n; ++i) grad[i] -= k.diag(i);
}

double objective_from_gradient(detail::KernelMatrix& k, std::span<const double> alpha,
                               std::span<const double> grad) {
  // (Ka)_i = (G_i + K_ii) / 2
  double linear = 0.0;
  double quadratic = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    linear += alpha[i] * k.diag(i);
    quadratic += alpha[i] * 0.5 * (grad[i] + k.diag(i));
  }
  return linear - quadratic;
}

// Exact optimum on a face: free coefficients solve
//   [2 K_FF  -1] [a_F]   [diag_F - 2 C K_FB 1]
//   [ 1'      0] [lam] = [1 - C |B|          ]
// Coefficients that leave (0, C) are pinned to the violated bound and the
// face is solved again, for a few rounds.
bool polish(detail::KernelMatrix& k, std::vector<double>& alpha, std::vector<double>& grad, double c,
            double tolerance) {
  constexpr int kRounds = 8;
  std::vector<double> candidate = alpha;
  for (int round = 0; round < kRounds; ++round) {
    std::vector<std::size_t> free_set;
    std::vector<std::size_t> bound_set;
    for (std::size_t i = 0; i < candidate.size(); ++i) {
      if (candidate[i] == c) {
        bound_set.push_back(i);
      } else if (candidate[i] > 0.0) {
        free_set.push_back(i);
      }
    }
    const std::size_t f = free_set.size();
    if (f == 0 || f > kMaxPolishSize) return false;

    Eigen::MatrixXd system = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(f + 1),
                                                   static_cast<Eigen::Index>(f + 1));
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(f + 1));
    for (std::size_t a = 0; a < f; ++a) {
      const auto ea = static_cast<Eigen::Index>(a);
      const auto row = k.row(free_set[a]);
      for (std::size_t b = 0; b < f; ++b) system(ea, static_cast<Eigen::Index>(b)) = 2.0 * row[free_set[b]];
      system(ea, static_cast<Eigen::Index>(f)) = -1.0;
      system(static_cast<Eigen::Index>(f), ea) = 1.0;
      double bound_term = 0.0;
      for (std::size_t b : bound_set) bound_term += row[b];
      rhs(ea) = k.diag(free_set[a]) - 2.0 * c * bound_term;
    }
    rhs(static_cast<Eigen::Index>(f)) = 1.0 - c * static_cast<double>(bound_set.size());

    Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
    if (lu.rank() < static_cast<Eigen::Index>(f + 1)) return false;
    const Eigen::VectorXd solution = lu.solve(rhs);
    if (!solution.allFinite()) return false;
    if ((system * solution - rhs).norm() > 1e-9 * (1.0 + rhs.norm())) return false;

    bool interior = true;
    for (std::size_t a = 0; a < f; ++a) {
      const double v = solution(static_cast<Eigen::Index>(a));
      if (!(v > alpha_zero_tolerance(c))) {
        candidate[free_set[a]] = 0.0;
        interior = false;
      } else if (!(v < c)) {
        candidate[free_set[a]] = c;
        interior = false;
      } else {
        candidate[free_set[a]] = v;
      }
    }
    if (interior) break;
    if (round + 1 == kRounds) return false;
  }

  std::vector<double> candidate_grad;
  compute_gradient(k, candidate, candidate_grad);
  const WorkingPair pair = select_pair(candidate, candidate_grad, c);
  if (!(pair.gap <= tolerance)) return false;
  double sum = 0.0;
  for (double v : candidate) sum += v;
  if (std::abs(sum - 1.0) > 1e-12) return false;
  if (objective_from_gradient(k, candidate, candidate_grad) <
      objective_from_gradient(k, alpha, grad) - 1e-12) {
    return false;
  }
  alpha = std::move(candidate);
  grad = std::move(candidate_grad);
  return true;
}

}  // namespace

DualSolution solve_dual(const ObservationMatrix& data, const KernelSpec& kernel, double penalty,
                        const SolverOptions& options) {
  const std::size_t n = data.rows();
  if (!(penalty > 0.0) || !std::isfinite(penalty)) {
    throw InvalidArgument("penalty C must be finite and positive");
  }
  if (penalty * static_cast<double>(n) < 1.0 - 1e-12) {
    throw InvalidArgument("penalty C = " + std::to_string(penalty) + " is infeasible for " +
                          std::to_string(n) + " observations (need C >= 1/p)");
  }
  if (!(options.tolerance > 0.0)) throw InvalidArgument("solver tolerance must be positive");

  const double c = std::max(penalty, 1.0 / static_cast<double>(n));
  const std::size_t max_iterations =
      options.max_iterations != 0 ? options.max_iterations : 100 * n * n;

  detail::KernelMatrix k(data, kernel);
  std::vector<double> alpha(n, 1.0 / static_cast<double>(n));
  std::vector<double> grad;
  compute_gradient(k, alpha, grad);

  // Pairwise steps zig-zag on near-duplicate rows; an exact solve on the
  // current free set at fixed intervals finishes such tails.
  const std::size_t polish_interval = std::max<std::size_t>(n, 100);

  DualSolution result;
  std::size_t iteration = 0;
  std::size_t last_polish = 0;
  bool refreshed = false;
  for (;;) {
    if (options.polish && iteration > 0 && iteration % polish_interval == 0 && iteration != last_polish) {
      last_polish = iteration;
      if (polish(k, alpha, grad, c, options.tolerance)) result.polished = true;
    }
    const WorkingPair pair = select_pair(alpha, grad, c);
    if (pair.gap < options.tolerance) {
      if (refreshed) {
        result.max_violation = pair.gap;
        break;
      }
      // Drop accumulated rounding in the incremental gradient and re-check.
      compute_gradient(k, alpha, grad);
      refreshed = true;
      continue;
    }
    if (iteration >= max_iterations) {
      throw ConvergenceError("dual solver did not reach KKT tolerance " +
                                 std::to_string(options.tolerance) + " within " +
                                 std::to_string(max_iterations) + " iterations",
                             alpha, pair.gap, iteration);
    }
    refreshed = false;
    ++iteration;

    const std::size_t i = pair.down;
    const std::size_t j = pair.up;
    const auto row_i = k.row(i);
    const double k_ij = row_i[j];
    const double eta = k.diag(i) + k.diag(j) - 2.0 * k_ij;

    // Move t from a_i to a_j; the objective is quadratic in t with minimum at gap / (2 eta).
    double step = eta > 1e-15 ? pair.gap / (2.0 * eta) : std::numeric_limits<double>::infinity();
    step = std::min({step, alpha[i], c - alpha[j]});
    alpha[i] = step == alpha[i] ? 0.0 : alpha[i] - step;
    alpha[j] = step == c - alpha[j] ? c : alpha[j] + step;

    const auto ri = k.row(i);
    const auto rj = k.row(j);
    for (std::size_t t = 0; t < n; ++t) grad[t] += 2.0 * step * (rj[t] - ri[t]);
  }

  if (options.polish && polish(k, alpha, grad, c, options.tolerance)) result.polished = true;
  result.max_violation = select_pair(alpha, grad, c).gap;
  result.objective = objective_from_gradient(k, alpha, grad);
  result.iterations = iteration;
  result.alphas = std::move(alpha);
  return result;
}

double boundary_band(double r_squared) noexcept { return std::max(1e-9, 1e-6 * r_squared); }

namespace {

double offset_of(const ObservationMatrix& sv, std::span<const double> alphas, const KernelSpec& kernel) {
  double w = 0.0;
  for (std::size_t i = 0; i < sv.rows(); ++i) {
    w += alphas[i] * alphas[i] * kernel.self(sv.row(i));
    for (std::size_t j = i + 1; j < sv.rows(); ++j) {
      w += 2.0 * alphas[i] * alphas[j] * kernel(sv.row(i), sv.row(j));
    }
  }
  return w;
}

double distance_to_center(const ObservationMatrix& sv, std::span<const double> alphas,
                          const KernelSpec& kernel, double offset, std::span<const double> z) {
  double cross = 0.0;
  for (std::size_t i = 0; i < sv.rows(); ++i) cross += alphas[i] * kernel(sv.row(i), z);
  return std::max(0.0, kernel.self(z) - 2.0 * cross + offset);
}

void check_model_inputs(const ObservationMatrix& sv, std::span<const double> alphas, double penalty) {
  if (alphas.size() != sv.rows()) {
    throw InvalidArgument("model has " + std::to_string(sv.rows()) + " support vectors but " +
                          std::to_string(alphas.size()) + " coefficients");
  }
  double sum = 0.0;
  for (double a : alphas) {
    if (!(a > 0.0) || !(a <= penalty)) {
      throw InvalidArgument("support vector coefficient outside (0, C]");
    }
    sum += a;
  }
  if (std::abs(sum - 1.0) > 1e-8) {
    throw InvalidArgument("support vector coefficients sum to " + std::to_string(sum) + ", not 1");
  }
}

}  // namespace

Threshold compute_threshold(const ObservationMatrix& support_vectors, std::span<const double> alphas,
                            double penalty, const KernelSpec& kernel) {
  if (alphas.size() != support_vectors.rows()) {
    throw InvalidArgument("support vector and coefficient counts differ");
  }
  const double w = offset_of(support_vectors, alphas, kernel);
  double boundary_sum = 0.0;
  std::size_t boundary_count = 0;
  double min_value = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < support_vectors.rows(); ++k) {
    const double value = distance_to_center(support_vectors, alphas, kernel, w, support_vectors.row(k));
    min_value = std::min(min_value, value);
    if (alphas[k] > 0.0 && alphas[k] < penalty) {
      boundary_sum += value;
      ++boundary_count;
    }
  }
  // Every coefficient at C sits on or outside the sphere, so the closest one
  // is the largest radius consistent with all of them.
  if (boundary_count == 0) return {std::isfinite(min_value) ? min_value : 0.0, true};
  return {std::max(0.0, boundary_sum / static_cast<double>(boundary_count)), false};
}

SvddModel::SvddModel(RestoreTag, ObservationMatrix support_vectors, std::vector<double> alphas,
                     KernelSpec kernel, SvddParams params)
    : support_vectors_(std::move(support_vectors)),
      alphas_(std::move(alphas)),
      kernel_(kernel),
      params_(params) {
  check_model_inputs(support_vectors_, alphas_, params_.penalty);
}

SvddModel::SvddModel(ObservationMatrix support_vectors, std::vector<double> alphas, KernelSpec kernel,
                     SvddParams params)
    : SvddModel(RestoreTag{}, std::move(support_vectors), std::move(alphas), kernel, params) {
  offset_ = offset_of(support_vectors_, alphas_, kernel_);
  center_.assign(dim(), 0.0);
  for (std::size_t i = 0; i < support_count(); ++i) {
    const auto x = support_vectors_.row(i);
    for (std::size_t c = 0; c < dim(); ++c) center_[c] += alphas_[i] * x[c];
  }
  const Threshold t = compute_threshold(support_vectors_, alphas_, params_.penalty, kernel_);
  r_squared_ = t.r_squared;
  threshold_fallback_ = t.fallback;
}

SvddModel SvddModel::restore(ObservationMatrix support_vectors, std::vector<double> alphas,
                             KernelSpec kernel, SvddParams params, double r_squared, double offset,
                             std::vector<double> center, bool threshold_fallback) {
  SvddModel model(RestoreTag{}, std::move(support_vectors), std::move(alphas), kernel, params);
  if (center.size() != model.dim()) throw InvalidArgument("center dimension mismatch");
  if (!(r_squared >= 0.0) || !std::isfinite(r_squared) || !std::isfinite(offset) || !all_finite(center)) {
    throw InvalidArgument("restored model has invalid R^2, W or center");
  }
  model.r_squared_ = r_squared;
  model.offset_ = offset;
  model.center_ = std::move(center);
  model.threshold_fallback_ = threshold_fallback;
  return model;
}

double SvddModel::score(std::span<const double> z) const {
  if (z.size() != dim()) {
    throw InvalidArgument("scored observation has dimension " + std::to_string(z.size()) +
                          ", model expects " + std::to_string(dim()));
  }
  return distance_to_center(support_vectors_, alphas_, kernel_, offset_, z);
}

Position SvddModel::classify(std::span<const double> z) const {
  const double d2 = score(z);
  const double band = boundary_band(r_squared_);
  if (d2 > r_squared_ + band) return Position::outside;
  if (d2 < r_squared_ - band) return Position::inside;
  return Position::boundary;
}

namespace {

SvddModel build_model(const ObservationMatrix& data, const KernelSpec& kernel, SvddParams params,
                      const SolverOptions& options) {
  const DualSolution solution = solve_dual(data, kernel, params.penalty, options);
  params.penalty = std::max(params.penalty, 1.0 / static_cast<double>(data.rows()));
  const double zero_tol = alpha_zero_tolerance(params.penalty);

  std::vector<std::size_t> keep;
  std::vector<double> alphas;
  for (std::size_t i = 0; i < solution.alphas.size(); ++i) {
    if (solution.alphas[i] > zero_tol) {
      keep.push_back(i);
      alphas.push_back(std::min(solution.alphas[i], params.penalty));
    }
  }
  const double kept = std::accumulate(alphas.begin(), alphas.end(), 0.0);
  if (std::abs(kept - 1.0) > 1e-12) {
    for (double& a : alphas) a = std::min(a / kept, params.penalty);
  }
  return {data.select(keep), std::move(alphas), kernel, params};
}

}  // namespace

SvddModel train_full(const ObservationMatrix& data, const KernelSpec& kernel, double outlier_fraction,
                     const SolverOptions& options) {
  return build_model(data, kernel, SvddParams::for_count(outlier_fraction, data.rows()), options);
}

SvddModel train_with_penalty(const ObservationMatrix& data, const KernelSpec& kernel, SvddParams params,
                             const SolverOptions& options) {
  if (!(params.penalty > 0.0) || !std::isfinite(params.penalty)) {
    throw InvalidArgument("penalty C must be finite and positive");
  }
  params.penalty = std::max(params.penalty, 1.0 / static_cast<double>(data.rows()));
  return build_model(data, kernel, params, options);
}

}  // namespace ktchart
