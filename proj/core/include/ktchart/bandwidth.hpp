#pragma once

#include <cstddef>
#include <cstdint>

#include "ktchart/observation_matrix.hpp"

namespace ktchart {

/// Median pairwise Euclidean distance over at most `max_rows` rows drawn
/// without replacement (all rows when p <= max_rows). Returns 1.0 when the
/// median is zero, e.g. for a single row or identical rows.
double median_distance_bandwidth(const ObservationMatrix& data, std::uint64_t seed,
                                 std::size_t max_rows = 1000);

}  // namespace ktchart
