#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ktchart/kernel.hpp"
#include "ktchart/observation_matrix.hpp"

namespace ktchart::detail {

/// Kernel Gram matrix. Dense up to `dense_limit` rows; beyond that rows are
/// computed on demand into a small LRU cache.
class KernelMatrix {
 public:
  static constexpr std::size_t kDefaultDenseLimit = 4096;

  KernelMatrix(const ObservationMatrix& data, const KernelSpec& kernel,
               std::size_t dense_limit = kDefaultDenseLimit, std::size_t cache_rows = 64);

  std::size_t size() const noexcept { return n_; }
  double diag(std::size_t i) const noexcept { return diag_[i]; }

  /// Row i. Valid until two further distinct rows are requested.
  std::span<const double> row(std::size_t i);

  double at(std::size_t i, std::size_t j);

 private:
  const ObservationMatrix& data_;
  KernelSpec kernel_;
  std::size_t n_;
  bool dense_;
  std::vector<double> diag_;
  std::vector<double> dense_values_;

  struct Slot {
    std::size_t index = static_cast<std::size_t>(-1);
    std::size_t last_used = 0;
    std::vector<double> values;
  };
  std::vector<Slot> cache_;
  std::size_t clock_ = 0;
};

}  // namespace ktchart::detail
