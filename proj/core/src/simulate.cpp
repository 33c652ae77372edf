#include "ktchart/simulate.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <string>

#include "ktchart/error.hpp"
#include "ktchart/seed.hpp"

namespace ktchart {

std::string_view to_string(FaultKind kind) noexcept {
  switch (kind) {
    case FaultKind::mean_step:
      return "mean_step";
    case FaultKind::variance_scale:
      return "variance_scale";
    case FaultKind::drift_ramp:
      return "drift_ramp";
    case FaultKind::correlation_break:
      return "correlation_break";
  }
  return "unknown";
}

FaultKind parse_fault_kind(std::string_view text) {
  for (FaultKind k : {FaultKind::mean_step, FaultKind::variance_scale, FaultKind::drift_ramp,
                      FaultKind::correlation_break}) {
    if (text == to_string(k)) return k;
  }
  throw InvalidArgument("unknown fault kind '" + std::string(text) + "'");
}

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::MatrixXd cholesky_factor(const RowMatrix& correlation, const std::string& label) {
  Eigen::LLT<Eigen::MatrixXd> llt(correlation);
  if (llt.info() != Eigen::Success) {
    throw InvalidArgument("segment '" + label + "': correlation matrix is not positive definite");
  }
  return llt.matrixL();
}

RowMatrix correlation_of(const SegmentSpec& spec) {
  const auto d = static_cast<Eigen::Index>(spec.dim());
  if (!spec.correlation) return RowMatrix::Identity(d, d);
  return Eigen::Map<const RowMatrix>(spec.correlation->data(), d, d);
}

bool applies_to(const FaultSpec& fault, std::size_t channel) {
  if (fault.channels.empty()) return true;
  for (std::size_t c : fault.channels) {
    if (c == channel) return true;
  }
  return false;
}

}  // namespace

void SegmentSpec::validate() const {
  const std::string where = "segment '" + label + "': ";
  const std::size_t d = dim();
  if (length == 0) throw InvalidArgument(where + "length must be positive");
  if (d == 0) throw InvalidArgument(where + "mean must have at least one component");
  if (scale.size() != d) throw InvalidArgument(where + "scale and mean differ in dimension");
  if (!all_finite(mean)) throw InvalidArgument(where + "mean must be finite");
  for (double s : scale) {
    if (!(s >= 0.0) || !std::isfinite(s)) throw InvalidArgument(where + "scale entries must be finite and >= 0");
  }
  if (correlation) {
    if (correlation->size() != d * d) throw InvalidArgument(where + "correlation must be d x d");
    if (!all_finite(*correlation)) throw InvalidArgument(where + "correlation must be finite");
    for (std::size_t i = 0; i < d; ++i) {
      if (std::abs((*correlation)[i * d + i] - 1.0) > 1e-12) {
        throw InvalidArgument(where + "correlation diagonal must be 1");
      }
      for (std::size_t j = i + 1; j < d; ++j) {
        if (std::abs((*correlation)[i * d + j] - (*correlation)[j * d + i]) > 1e-12) {
          throw InvalidArgument(where + "correlation must be symmetric");
        }
      }
    }
    cholesky_factor(correlation_of(*this), label);
  }
  if (fault) {
    if (fault->onset >= length) throw InvalidArgument(where + "fault onset must lie inside the segment");
    if (!std::isfinite(fault->magnitude)) throw InvalidArgument(where + "fault magnitude must be finite");
    if (fault->kind == FaultKind::variance_scale && !(fault->magnitude > 0.0)) {
      throw InvalidArgument(where + "variance_scale magnitude must be positive");
    }
    if (fault->kind == FaultKind::correlation_break && !(fault->magnitude >= 0.0 && fault->magnitude <= 1.0)) {
      throw InvalidArgument(where + "correlation_break magnitude must lie in [0, 1]");
    }
    for (std::size_t c : fault->channels) {
      if (c >= d) throw InvalidArgument(where + "fault channel " + std::to_string(c) + " out of range");
    }
  }
  if (mixture) {
    if (!(mixture->weight >= 0.0 && mixture->weight <= 1.0)) {
      throw InvalidArgument(where + "mixture weight must lie in [0, 1]");
    }
    if (mixture->alternate_mean.size() != d || !all_finite(mixture->alternate_mean)) {
      throw InvalidArgument(where + "mixture alternate mean must be finite with dimension d");
    }
  }
}

ObservationMatrix gen_segment(const SegmentSpec& spec, std::uint64_t seed) {
  spec.validate();
  const std::size_t d = spec.dim();
  const auto ed = static_cast<Eigen::Index>(d);
  const RowMatrix correlation = correlation_of(spec);
  const Eigen::MatrixXd factor = cholesky_factor(correlation, spec.label);

  Eigen::MatrixXd broken_factor = factor;
  if (spec.fault && spec.fault->kind == FaultKind::correlation_break) {
    const double w = spec.fault->magnitude;
    const RowMatrix mixed = (1.0 - w) * correlation + w * RowMatrix::Identity(ed, ed);
    broken_factor = cholesky_factor(mixed, spec.label);
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  std::vector<double> values(spec.length * d);
  Eigen::VectorXd z(ed);
  for (std::size_t t = 0; t < spec.length; ++t) {
    // Draw the same variates for every row whatever the fault, so the
    // pre-onset prefix is identical to the fault-free segment.
    for (Eigen::Index c = 0; c < ed; ++c) z(c) = normal(rng);
    const double u = uniform(rng);
    const std::vector<double>& mu =
        (spec.mixture && u < spec.mixture->weight) ? spec.mixture->alternate_mean : spec.mean;

    const bool faulty = spec.fault && t >= spec.fault->onset;
    const Eigen::VectorXd y = factor * z;
    Eigen::VectorXd y_broken;
    if (faulty && spec.fault->kind == FaultKind::correlation_break) y_broken = broken_factor * z;

    double* row = values.data() + t * d;
    for (std::size_t c = 0; c < d; ++c) {
      double deviation = spec.scale[c] * y(static_cast<Eigen::Index>(c));
      double shift = 0.0;
      if (faulty && applies_to(*spec.fault, c)) {
        const FaultSpec& f = *spec.fault;
        switch (f.kind) {
          case FaultKind::mean_step:
            shift = f.magnitude * spec.scale[c];
            break;
          case FaultKind::variance_scale:
            deviation *= std::sqrt(f.magnitude);
            break;
          case FaultKind::drift_ramp:
            shift = f.magnitude * spec.scale[c] * static_cast<double>(t - f.onset + 1) /
                    static_cast<double>(spec.length - f.onset);
            break;
          case FaultKind::correlation_break:
            deviation = spec.scale[c] * y_broken(static_cast<Eigen::Index>(c));
            break;
        }
      }
      row[c] = mu[c] + deviation + shift;
    }
  }
  return {spec.length, d, std::move(values)};
}

Stream compose_stream(const std::vector<SegmentSpec>& segments, std::uint64_t seed) {
  if (segments.empty()) throw InvalidArgument("a stream needs at least one segment");
  const std::size_t d = segments.front().dim();
  std::vector<double> values;
  std::vector<std::size_t> boundaries;
  std::vector<std::string> labels;
  std::size_t rows = 0;
  for (std::size_t j = 0; j < segments.size(); ++j) {
    if (segments[j].dim() != d) {
      throw InvalidArgument("segment '" + segments[j].label + "' has dimension " +
                            std::to_string(segments[j].dim()) + ", stream has " + std::to_string(d));
    }
    const ObservationMatrix part = gen_segment(segments[j], derive_seed(seed, j, seed_domain::segment));
    if (j > 0) boundaries.push_back(rows + 1);
    rows += part.rows();
    values.insert(values.end(), part.values().begin(), part.values().end());
    labels.push_back(segments[j].label);
  }
  return {ObservationMatrix(rows, d, std::move(values)), std::move(boundaries), std::move(labels)};
}

}  // namespace ktchart
