#include "kernel_matrix.hpp"

#include <algorithm>

namespace ktchart::detail {

KernelMatrix::KernelMatrix(const ObservationMatrix& data, const KernelSpec& kernel,
                           std::size_t dense_limit, std::size_t cache_rows)
    : data_(data), kernel_(kernel), n_(data.rows()), dense_(data.rows() <= dense_limit) {
  diag_.resize(n_);
  for (std::size_t i = 0; i < n_; ++i) diag_[i] = kernel_.self(data_.row(i));

  if (dense_) {
    dense_values_.resize(n_ * n_);
    for (std::size_t i = 0; i < n_; ++i) {
      dense_values_[i * n_ + i] = diag_[i];
      for (std::size_t j = i + 1; j < n_; ++j) {
        const double v = kernel_(data_.row(i), data_.row(j));
        dense_values_[i * n_ + j] = v;
        dense_values_[j * n_ + i] = v;
      }
    }
  } else {
    cache_.resize(std::max<std::size_t>(cache_rows, 2));
  }
}

std::span<const double> KernelMatrix::row(std::size_t i) {
  if (dense_) return {dense_values_.data() + i * n_, n_};

  ++clock_;
  auto hit = std::find_if(cache_.begin(), cache_.end(), [i](const Slot& s) { return s.index == i; });
  if (hit == cache_.end()) {
    hit = std::min_element(cache_.begin(), cache_.end(),
                           [](const Slot& a, const Slot& b) { return a.last_used < b.last_used; });
    hit->index = i;
    hit->values.resize(n_);
    const auto xi = data_.row(i);
    for (std::size_t j = 0; j < n_; ++j) hit->values[j] = (j == i) ? diag_[i] : kernel_(xi, data_.row(j));
  }
  hit->last_used = clock_;
  return hit->values;
}

double KernelMatrix::at(std::size_t i, std::size_t j) {
  if (dense_) return dense_values_[i * n_ + j];
  if (i == j) return diag_[i];
  return kernel_(data_.row(i), data_.row(j));
}

}  // namespace ktchart::detail
