#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ktchart/kernel.hpp"
#include "ktchart/observation_matrix.hpp"

namespace ktchart {

inline constexpr double kDefaultKktTolerance = 1e-6;

/// Expected outlier fraction f and the box bound C = 1 / (n f) it implies.
struct SvddParams {
  double outlier_fraction = 0.001;
  double penalty = 1.0;

  /// C = 1 / (count * f). Throws InvalidArgument unless 0 < f <= 1 and count >= 1.
  static SvddParams for_count(double outlier_fraction, std::size_t count);
};

struct SolverOptions {
  /// Stop once the largest pairwise KKT violation, measured in squared
  /// feature-space distance, falls below this.
  double tolerance = kDefaultKktTolerance;
  /// Zero selects 100 * p^2.
  std::size_t max_iterations = 0;
  /// After convergence, solve the equality-constrained system on the free
  /// coefficients exactly and keep it when it stays feasible.
  bool polish = true;
};

struct DualSolution {
  std::vector<double> alphas;
  /// sum_i a_i K(x_i, x_i) - sum_ij a_i a_j K(x_i, x_j)
  double objective = 0.0;
  double max_violation = 0.0;
  std::size_t iterations = 0;
  bool polished = false;
};

/// Maximises the SVDD dual over {sum a = 1, 0 <= a <= C} by pairwise analytic
/// updates on the maximal-violation pair.
///
/// Throws InvalidArgument when C < 1/p and ConvergenceError when the
/// iteration cap is reached first.
DualSolution solve_dual(const ObservationMatrix& data, const KernelSpec& kernel, double penalty,
                        const SolverOptions& options = {});

struct Threshold {
  double r_squared = 0.0;
  /// No coefficient was strictly below C; R^2 is the min over all support vectors.
  bool fallback = false;
};

/// R^2 = K(x_k, x_k) - 2 sum_i a_i K(x_i, x_k) + W averaged over the boundary
/// support vectors (0 < a_k < C), clamped at zero.
Threshold compute_threshold(const ObservationMatrix& support_vectors, std::span<const double> alphas,
                            double penalty, const KernelSpec& kernel);

/// Half-width of the band around R^2 treated as "on the boundary".
double boundary_band(double r_squared) noexcept;

enum class Position { inside, boundary, outside };

/// Immutable trained data description.
class SvddModel {
 public:
  /// Builds a model from retained support vectors and their coefficients,
  /// deriving W, the center and R^2.
  SvddModel(ObservationMatrix support_vectors, std::vector<double> alphas, KernelSpec kernel,
            SvddParams params);

  /// Rebuilds a model from persisted values without recomputing them.
  static SvddModel restore(ObservationMatrix support_vectors, std::vector<double> alphas,
                           KernelSpec kernel, SvddParams params, double r_squared, double offset,
                           std::vector<double> center, bool threshold_fallback);

  const ObservationMatrix& support_vectors() const noexcept { return support_vectors_; }
  std::span<const double> alphas() const noexcept { return alphas_; }
  double r_squared() const noexcept { return r_squared_; }
  /// W = sum_ij a_i a_j K(x_i, x_j)
  double offset() const noexcept { return offset_; }
  /// Input-space center sum_i a_i x_i.
  std::span<const double> center() const noexcept { return center_; }
  const KernelSpec& kernel() const noexcept { return kernel_; }
  const SvddParams& params() const noexcept { return params_; }
  bool threshold_fallback() const noexcept { return threshold_fallback_; }
  std::size_t dim() const noexcept { return support_vectors_.dim(); }
  std::size_t support_count() const noexcept { return support_vectors_.rows(); }

  /// dist^2(z) = K(z, z) - 2 sum_i a_i K(x_i, z) + W, clamped at zero.
  double score(std::span<const double> z) const;
  Position classify(std::span<const double> z) const;

 private:
  struct RestoreTag {};
  SvddModel(RestoreTag, ObservationMatrix support_vectors, std::vector<double> alphas,
            KernelSpec kernel, SvddParams params);

  ObservationMatrix support_vectors_;
  std::vector<double> alphas_;
  KernelSpec kernel_;
  SvddParams params_;
  double r_squared_ = 0.0;
  double offset_ = 0.0;
  std::vector<double> center_;
  bool threshold_fallback_ = false;
};

/// Coefficients at or below this are treated as zero and dropped.
inline double alpha_zero_tolerance(double penalty) noexcept { return 1e-8 * penalty; }

/// Trains on all rows with C = 1 / (p f).
SvddModel train_full(const ObservationMatrix& data, const KernelSpec& kernel, double outlier_fraction,
                     const SolverOptions& options = {});

/// Trains with an explicit penalty. `params.penalty` is raised to 1/p when it
/// would otherwise make the problem infeasible.
SvddModel train_with_penalty(const ObservationMatrix& data, const KernelSpec& kernel, SvddParams params,
                             const SolverOptions& options = {});

inline double score(const SvddModel& model, std::span<const double> z) { return model.score(z); }
inline Position classify(const SvddModel& model, std::span<const double> z) { return model.classify(z); }

}  // namespace ktchart
