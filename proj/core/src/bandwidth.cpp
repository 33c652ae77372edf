#include "ktchart/bandwidth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "ktchart/error.hpp"

namespace ktchart {

double median_distance_bandwidth(const ObservationMatrix& data, std::uint64_t seed, std::size_t max_rows) {
  if (max_rows < 2) throw InvalidArgument("bandwidth heuristic needs max_rows >= 2");
  std::vector<std::size_t> rows(data.rows());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  if (rows.size() > max_rows) {
    std::mt19937_64 rng(seed);
    // Partial Fisher-Yates: the first max_rows entries become the subsample.
    for (std::size_t i = 0; i < max_rows; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, rows.size() - 1);
      std::swap(rows[i], rows[pick(rng)]);
    }
    rows.resize(max_rows);
  }
  if (rows.size() < 2) return 1.0;

  std::vector<double> distances;
  distances.reserve(rows.size() * (rows.size() - 1) / 2);
  for (std::size_t a = 0; a < rows.size(); ++a) {
    for (std::size_t b = a + 1; b < rows.size(); ++b) {
      distances.push_back(std::sqrt(squared_distance(data.row(rows[a]), data.row(rows[b]))));
    }
  }
  const auto mid = distances.begin() + static_cast<std::ptrdiff_t>(distances.size() / 2);
  std::nth_element(distances.begin(), mid, distances.end());
  double median = *mid;
  if (distances.size() % 2 == 0) {
    const double lower = *std::max_element(distances.begin(), mid);
    median = 0.5 * (median + lower);
  }
  return median > 0.0 ? median : 1.0;
}

}  // namespace ktchart
