#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ktchart {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller-supplied value violates a documented precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A numerical routine could not produce a trustworthy result.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// The dual solver hit its iteration cap. Carries the best iterate so callers
/// can inspect or salvage it.
class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(const std::string& what, std::vector<double> best_alphas,
                   double residual, std::size_t iterations)
      : NumericalError(what),
        best_alphas_(std::move(best_alphas)),
        residual_(residual),
        iterations_(iterations) {}

  const std::vector<double>& best_alphas() const noexcept { return best_alphas_; }
  double residual() const noexcept { return residual_; }
  std::size_t iterations() const noexcept { return iterations_; }

 private:
  std::vector<double> best_alphas_;
  double residual_;
  std::size_t iterations_;
};

/// Filesystem or stream failure.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Input data (CSV rows) rejected by the ingest policy.
class DataError : public Error {
 public:
  using Error::Error;
};

/// A persisted model or chart file is malformed, truncated or of an
/// unsupported version. `field()` names the offending entry.
class FormatError : public Error {
 public:
  FormatError(std::string field, const std::string& what)
      : Error("'" + field + "': " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace ktchart
