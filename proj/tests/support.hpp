#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "ktchart/observation_matrix.hpp"

namespace test_support {

using Points = std::vector<std::vector<double>>;

inline Points uniform_points(std::size_t n, std::size_t d, std::uint64_t seed, double lo = -2.0, double hi = 2.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  Points pts(n, std::vector<double>(d));
  for (auto& p : pts)
    for (auto& v : p) v = u(rng);
  return pts;
}

inline Points gaussian_points(std::size_t n, std::size_t d, std::uint64_t seed, double sigma = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, sigma);
  Points pts(n, std::vector<double>(d));
  for (auto& p : pts)
    for (auto& v : p) v = g(rng);
  return pts;
}

inline std::vector<double> vec(std::span<const double> s) { return {s.begin(), s.end()}; }

inline ktchart::ObservationMatrix to_matrix(const Points& pts) { return ktchart::ObservationMatrix::from_rows(pts); }

inline Points to_points(const ktchart::ObservationMatrix& m) {
  Points pts;
  for (std::size_t i = 0; i < m.rows(); ++i) pts.emplace_back(m.row(i).begin(), m.row(i).end());
  return pts;
}

}  // namespace test_support
