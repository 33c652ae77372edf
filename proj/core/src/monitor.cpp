#include "ktchart/monitor.hpp"

#include <algorithm>
#include <string>

#include "ktchart/error.hpp"
#include "ktchart/seed.hpp"

namespace ktchart {

Phase2Monitor::Phase2Monitor(std::shared_ptr<const PhaseIModel> model) : model_(std::move(model)) {
  if (!model_) throw InvalidArgument("Phase II monitor needs a Phase I model");
  dim_ = model_->center_model.dim();
  buffer_.reserve(model_->config.window.length() * dim_);
}

std::optional<ChartPoint> Phase2Monitor::push(std::span<const double> observation) {
  if (observation.size() != dim_) {
    throw InvalidArgument("observation has dimension " + std::to_string(observation.size()) +
                          ", monitor expects " + std::to_string(dim_));
  }
  if (!all_finite(observation)) throw InvalidArgument("observation contains a non-finite value");

  buffer_.insert(buffer_.end(), observation.begin(), observation.end());
  ++seen_;
  peak_buffered_ = std::max(peak_buffered_, buffered());

  const WindowSpec& spec = model_->config.window;
  if (buffered() < spec.length()) return std::nullopt;

  const std::size_t q = next_window_++;
  SamplingConfig sampling = model_->config.sampling;
  sampling.rng_seed = derive_seed(model_->config.sampling.rng_seed, q, seed_domain::phase2_window);
  const ObservationMatrix window(spec.length(), dim_, buffer_);
  const SampledModel trained =
      train_sampled(window, model_->config.window_kernel, model_->config.fraction_f, sampling, model_->config.solver);

  // Keep the last m observations for the next window.
  buffer_.erase(buffer_.begin(), buffer_.begin() + static_cast<std::ptrdiff_t>(spec.stride() * dim_));
  return make_chart_point(*model_, q, window_bounds(q, spec), trained.model);
}

}  // namespace ktchart
