#pragma once

#include <cstddef>

namespace ktchart {

/// Window length n and overlap m; consecutive windows advance by n - m.
class WindowSpec {
 public:
  /// Throws InvalidArgument unless n >= 2 and m <= n - 1.
  WindowSpec(std::size_t length, std::size_t overlap);

  std::size_t length() const noexcept { return length_; }
  std::size_t overlap() const noexcept { return overlap_; }
  std::size_t stride() const noexcept { return length_ - overlap_; }

  friend bool operator==(const WindowSpec&, const WindowSpec&) = default;

 private:
  std::size_t length_;
  std::size_t overlap_;
};

/// 1-based inclusive observation range.
struct WindowBounds {
  std::size_t start = 0;
  std::size_t end = 0;
  friend bool operator==(const WindowBounds&, const WindowBounds&) = default;
};

/// Bounds of window i (1-based): start = (i - 1)(n - m) + 1, end = start + n - 1.
WindowBounds window_bounds(std::size_t index, const WindowSpec& spec);

/// Number of complete windows in p observations. Throws InvalidArgument if p < n.
std::size_t window_count(std::size_t observations, const WindowSpec& spec);

}  // namespace ktchart
