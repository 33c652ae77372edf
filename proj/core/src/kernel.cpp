#include "ktchart/kernel.hpp"

#include <cmath>
#include <string>

#include "ktchart/error.hpp"
#include "ktchart/observation_matrix.hpp"

namespace ktchart {

std::string_view to_string(KernelKind kind) noexcept {
  switch (kind) {
    case KernelKind::linear:
      return "linear";
    case KernelKind::gaussian:
      return "gaussian";
  }
  return "unknown";
}

KernelKind parse_kernel_kind(std::string_view text) {
  if (text == "linear") return KernelKind::linear;
  if (text == "gaussian") return KernelKind::gaussian;
  throw InvalidArgument("unknown kernel kind '" + std::string(text) + "'");
}

KernelSpec KernelSpec::gaussian(double bandwidth) {
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
    throw InvalidArgument("gaussian bandwidth must be finite and positive");
  }
  return {KernelKind::gaussian, bandwidth};
}

double KernelSpec::operator()(std::span<const double> x, std::span<const double> y) const {
  if (x.size() != y.size()) {
    throw InvalidArgument("kernel arguments differ in dimension (" + std::to_string(x.size()) +
                          " vs " + std::to_string(y.size()) + ")");
  }
  if (kind_ == KernelKind::linear) {
    double dot = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) dot += x[i] * y[i];
    return dot;
  }
  return std::exp(-squared_distance(x, y) / (2.0 * bandwidth_ * bandwidth_));
}

double KernelSpec::self(std::span<const double> x) const noexcept {
  if (kind_ == KernelKind::gaussian) return 1.0;
  double dot = 0.0;
  for (double v : x) dot += v * v;
  return dot;
}

double kernel_eval(std::span<const double> x, std::span<const double> y, const KernelSpec& k) {
  return k(x, y);
}

}  // namespace ktchart
