#pragma once

#include <span>
#include <string_view>

namespace ktchart {

enum class KernelKind { linear, gaussian };

std::string_view to_string(KernelKind kind) noexcept;
/// Accepts "linear" or "gaussian"; throws InvalidArgument otherwise.
KernelKind parse_kernel_kind(std::string_view text);

/// Kernel choice plus its bandwidth. Gaussian: K(x, y) = exp(-|x - y|^2 / (2 s^2)).
class KernelSpec {
 public:
  static KernelSpec linear() noexcept { return KernelSpec(KernelKind::linear, 0.0); }
  /// Throws InvalidArgument unless s is finite and positive.
  static KernelSpec gaussian(double bandwidth);

  KernelKind kind() const noexcept { return kind_; }
  /// Zero for the linear kernel.
  double bandwidth() const noexcept { return bandwidth_; }

  /// Throws InvalidArgument on dimension mismatch.
  double operator()(std::span<const double> x, std::span<const double> y) const;

  /// K(x, x) without the dimension check.
  double self(std::span<const double> x) const noexcept;

  friend bool operator==(const KernelSpec&, const KernelSpec&) = default;

 private:
  KernelSpec(KernelKind kind, double bandwidth) noexcept : kind_(kind), bandwidth_(bandwidth) {}

  KernelKind kind_;
  double bandwidth_;
};

/// Same as `k(x, y)`.
double kernel_eval(std::span<const double> x, std::span<const double> y, const KernelSpec& k);

}  // namespace ktchart
