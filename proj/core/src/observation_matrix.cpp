#include "ktchart/observation_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ktchart/error.hpp"

namespace ktchart {

bool all_finite(std::span<const double> values) noexcept {
  return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

double squared_distance(std::span<const double> x, std::span<const double> y) noexcept {
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double diff = x[i] - y[i];
    sum += diff * diff;
  }
  return sum;
}

ObservationMatrix::ObservationMatrix(std::size_t rows, std::size_t dim, std::vector<double> values)
    : rows_(rows), dim_(dim), values_(std::move(values)) {
  if (rows_ == 0 || dim_ == 0) {
    throw InvalidArgument("observation matrix needs at least one row and one column");
  }
  if (values_.size() != rows_ * dim_) {
    throw InvalidArgument("observation matrix expects " + std::to_string(rows_ * dim_) +
                          " values, got " + std::to_string(values_.size()));
  }
  if (!all_finite(values_)) {
    throw InvalidArgument("observation matrix contains a non-finite value");
  }
}

ObservationMatrix ObservationMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw InvalidArgument("observation matrix needs at least one row");
  const std::size_t dim = rows.front().size();
  std::vector<double> values;
  values.reserve(rows.size() * dim);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != dim) {
      throw InvalidArgument("row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) +
                            " values, expected " + std::to_string(dim));
    }
    values.insert(values.end(), rows[i].begin(), rows[i].end());
  }
  return {rows.size(), dim, std::move(values)};
}

ObservationMatrix ObservationMatrix::from_rows(
    std::initializer_list<std::initializer_list<double>> rows) {
  std::vector<std::vector<double>> copy;
  copy.reserve(rows.size());
  for (const auto& r : rows) copy.emplace_back(r);
  return from_rows(copy);
}

ObservationMatrix ObservationMatrix::slice(std::size_t first, std::size_t count) const {
  if (count == 0 || first + count > rows_) {
    throw InvalidArgument("slice [" + std::to_string(first) + ", " + std::to_string(first + count) +
                          ") out of range for " + std::to_string(rows_) + " rows");
  }
  const auto begin = values_.begin() + static_cast<std::ptrdiff_t>(first * dim_);
  return {count, dim_, std::vector<double>(begin, begin + static_cast<std::ptrdiff_t>(count * dim_))};
}

ObservationMatrix ObservationMatrix::select(std::span<const std::size_t> indices) const {
  std::vector<double> values;
  values.reserve(indices.size() * dim_);
  for (std::size_t i : indices) {
    if (i >= rows_) throw InvalidArgument("row index " + std::to_string(i) + " out of range");
    const auto r = row(i);
    values.insert(values.end(), r.begin(), r.end());
  }
  return {indices.size(), dim_, std::move(values)};
}

ObservationMatrix ObservationMatrix::concat(const ObservationMatrix& other) const {
  if (other.dim_ != dim_) {
    throw InvalidArgument("cannot concatenate matrices of dimension " + std::to_string(dim_) +
                          " and " + std::to_string(other.dim_));
  }
  std::vector<double> values = values_;
  values.insert(values.end(), other.values_.begin(), other.values_.end());
  return {rows_ + other.rows_, dim_, std::move(values)};
}

}  // namespace ktchart
