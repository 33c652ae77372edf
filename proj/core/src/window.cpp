#include "ktchart/window.hpp"

#include <string>

#include "ktchart/error.hpp"

namespace ktchart {

WindowSpec::WindowSpec(std::size_t length, std::size_t overlap) : length_(length), overlap_(overlap) {
  if (length_ < 2) throw InvalidArgument("window length n must be at least 2");
  if (overlap_ >= length_) {
    throw InvalidArgument("window overlap m = " + std::to_string(overlap_) +
                          " must satisfy m <= n - 1 = " + std::to_string(length_ - 1));
  }
}

WindowBounds window_bounds(std::size_t index, const WindowSpec& spec) {
  if (index == 0) throw InvalidArgument("window indices start at 1");
  const std::size_t start = (index - 1) * spec.stride() + 1;
  return {start, start + spec.length() - 1};
}

std::size_t window_count(std::size_t observations, const WindowSpec& spec) {
  if (observations < spec.length()) {
    throw InvalidArgument(std::to_string(observations) + " observations hold no complete window of length " +
                          std::to_string(spec.length()));
  }
  return (observations - spec.length()) / spec.stride() + 1;
}

}  // namespace ktchart
