#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "ktchart/chart.hpp"

namespace ktchart {

/// Phase II state machine: buffers observations, summarises each complete
/// window with the sampling trainer and plots it against the frozen Phase I
/// charts. Pushes on one monitor must be serialised by the caller.
class Phase2Monitor {
 public:
  explicit Phase2Monitor(std::shared_ptr<const PhaseIModel> model);

  /// Returns a point when the push completes a window. Throws
  /// InvalidArgument on a dimension mismatch or non-finite value, leaving the
  /// buffer unchanged.
  std::optional<ChartPoint> push(std::span<const double> observation);

  const PhaseIModel& model() const noexcept { return *model_; }
  std::size_t buffered() const noexcept { return buffer_.size() / dim_; }
  std::size_t peak_buffered() const noexcept { return peak_buffered_; }
  std::size_t observations_seen() const noexcept { return seen_; }
  std::size_t windows_emitted() const noexcept { return next_window_ - 1; }

 private:
  std::shared_ptr<const PhaseIModel> model_;
  std::size_t dim_;
  std::vector<double> buffer_;
  std::size_t peak_buffered_ = 0;
  std::size_t seen_ = 0;
  std::size_t next_window_ = 1;
};

}  // namespace ktchart
