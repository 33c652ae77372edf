#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace ktchart {

/// Row-major p x d matrix of finite observations. Never empty.
class ObservationMatrix {
 public:
  /// Throws InvalidArgument if rows or dim is zero, the value count does not
  /// match, or any value is NaN/Inf.
  ObservationMatrix(std::size_t rows, std::size_t dim, std::vector<double> values);

  static ObservationMatrix from_rows(const std::vector<std::vector<double>>& rows);
  static ObservationMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t dim() const noexcept { return dim_; }

  std::span<const double> row(std::size_t i) const noexcept {
    return {values_.data() + i * dim_, dim_};
  }
  std::span<const double> values() const noexcept { return values_; }

  /// Copy of rows [first, first + count).
  ObservationMatrix slice(std::size_t first, std::size_t count) const;

  /// Copy of the given rows, in the given order.
  ObservationMatrix select(std::span<const std::size_t> indices) const;

  /// Rows of `*this` followed by rows of `other`. Dimensions must agree.
  ObservationMatrix concat(const ObservationMatrix& other) const;

  friend bool operator==(const ObservationMatrix&, const ObservationMatrix&) = default;

 private:
  std::size_t rows_;
  std::size_t dim_;
  std::vector<double> values_;
};

/// True when every value is finite.
bool all_finite(std::span<const double> values) noexcept;

/// Squared Euclidean distance. Sizes must match (unchecked).
double squared_distance(std::span<const double> x, std::span<const double> y) noexcept;

}  // namespace ktchart
