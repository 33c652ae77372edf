#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <vector>

#include "ktchart/error.hpp"
#include "ktchart/sampling.hpp"
#include "support.hpp"

using namespace ktchart;
using test_support::to_matrix;

namespace {

std::vector<double> as_vector(std::span<const double> s) { return {s.begin(), s.end()}; }

}  // namespace

TEST(DrawSample, SingleRowRepeats) {
  const auto data = ObservationMatrix::from_rows({{4.0, 2.0}});
  SamplingRng rng(1);
  const auto s = draw_sample(data, 3, rng);
  ASSERT_EQ(s.rows(), 3u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(as_vector(s.row(i)), (std::vector<double>{4.0, 2.0}));
}

TEST(DrawSample, DeterministicGivenSeed) {
  const auto data = to_matrix(test_support::uniform_points(50, 3, 2));
  SamplingRng a(99), b(99);
  EXPECT_EQ(draw_sample(data, 20, a), draw_sample(data, 20, b));
}

TEST(DrawSample, UniformOverRows) {
  const auto data = ObservationMatrix::from_rows({{0.0}, {1.0}});
  SamplingRng rng(5);
  int ones = 0;
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) ones += draw_sample(data, 1, rng).row(0)[0] == 1.0;
  EXPECT_NEAR(ones / static_cast<double>(draws), 0.5, 0.05 * 0.5);
}

TEST(DrawSample, ZeroSizeRejected) {
  SamplingRng rng(0);
  EXPECT_THROW(draw_sample(ObservationMatrix::from_rows({{1.0}}), 0, rng), InvalidArgument);
}

TEST(UniqueRows, DropsLaterDuplicatesKeepingOrder) {
  const auto data = ObservationMatrix::from_rows({{3, 1}, {1, 1}, {3, 1}, {0, 2}, {1, 1}});
  EXPECT_EQ(unique_rows(data), ObservationMatrix::from_rows({{3, 1}, {1, 1}, {0, 2}}));
}

TEST(TrainSampled, ThreePointsMatchFullTraining) {
  const auto data = ObservationMatrix::from_rows({{0.0, 0.0}, {1.0, 0.2}, {0.3, 1.1}});
  const auto kernel = KernelSpec::gaussian(1.0);
  SamplingConfig cfg;
  cfg.sample_size = 3;
  cfg.rng_seed = 17;
  const auto sampled = train_sampled(data, kernel, 0.001, cfg);
  const auto full = train_full(data, kernel, 0.001);
  EXPECT_NEAR(sampled.model.r_squared(), full.r_squared(), 1e-3 * full.r_squared());
}

TEST(TrainSampled, SingleRow) {
  const auto data = ObservationMatrix::from_rows({{1.5, -2.0, 0.25}});
  const auto out = train_sampled(data, KernelSpec::gaussian(1.0), 0.001, {});
  EXPECT_DOUBLE_EQ(out.model.r_squared(), 0.0);
  EXPECT_EQ(as_vector(out.model.center()), (std::vector<double>{1.5, -2.0, 0.25}));
  EXPECT_TRUE(out.trace.converged);
  EXPECT_EQ(out.trace.iterations_used, 1u);
}

TEST(TrainSampled, TraceLengthMatchesIterations) {
  const auto data = to_matrix(test_support::gaussian_points(300, 2, 8));
  SamplingConfig cfg;
  cfg.rng_seed = 3;
  cfg.patience = 3;
  const auto out = train_sampled(data, KernelSpec::gaussian(2.0), 0.001, cfg);
  EXPECT_EQ(out.trace.steps.size(), out.trace.iterations_used);
  for (std::size_t t = 0; t < out.trace.steps.size(); ++t) EXPECT_EQ(out.trace.steps[t].iteration, t + 1);
}

TEST(TrainSampled, MasterThresholdNonDecreasing) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto data = to_matrix(test_support::gaussian_points(400, 3, 40 + seed));
    SamplingConfig cfg;
    cfg.rng_seed = seed;
    cfg.patience = 5;
    const auto out = train_sampled(data, KernelSpec::gaussian(2.0), 0.001, cfg);
    double previous = out.trace.initial_r_squared;
    for (const auto& step : out.trace.steps) {
      EXPECT_GE(step.r_squared, previous - 10 * kDefaultKktTolerance);
      previous = step.r_squared;
    }
  }
}

TEST(TrainSampled, SupportVectorsAreDataRows) {
  const auto pts = test_support::gaussian_points(250, 2, 12);
  const std::set<std::vector<double>> rows(pts.begin(), pts.end());
  SamplingConfig cfg;
  cfg.rng_seed = 21;
  cfg.sample_size = 10;
  const auto out = train_sampled(to_matrix(pts), KernelSpec::gaussian(1.5), 0.01, cfg);
  const auto& sv = out.model.support_vectors();
  for (std::size_t i = 0; i < sv.rows(); ++i) EXPECT_TRUE(rows.contains(as_vector(sv.row(i))));
  EXPECT_LE(sv.rows(), rows.size());
}

TEST(TrainSampled, BitIdenticalOnRepeat) {
  const auto data = to_matrix(test_support::gaussian_points(300, 4, 77));
  SamplingConfig cfg;
  cfg.rng_seed = 1234;
  const auto a = train_sampled(data, KernelSpec::gaussian(2.0), 0.001, cfg);
  const auto b = train_sampled(data, KernelSpec::gaussian(2.0), 0.001, cfg);
  EXPECT_EQ(a.model.support_vectors(), b.model.support_vectors());
  EXPECT_EQ(test_support::vec(a.model.alphas()), test_support::vec(b.model.alphas()));
  EXPECT_EQ(a.model.r_squared(), b.model.r_squared());
  ASSERT_EQ(a.trace.steps.size(), b.trace.steps.size());
  for (std::size_t t = 0; t < a.trace.steps.size(); ++t) {
    EXPECT_EQ(a.trace.steps[t].r_squared, b.trace.steps[t].r_squared);
    EXPECT_EQ(a.trace.steps[t].center, b.trace.steps[t].center);
  }
}

TEST(TrainSampled, IterationCapReportsNotConverged) {
  const auto data = to_matrix(test_support::gaussian_points(500, 3, 2));
  SamplingConfig cfg;
  cfg.rng_seed = 2;
  cfg.max_iterations = 2;
  cfg.eps_r = 1e-300;
  cfg.eps_a = 1e-300;
  const auto out = train_sampled(data, KernelSpec::gaussian(2.0), 0.001, cfg);
  EXPECT_FALSE(out.trace.converged);
  EXPECT_EQ(out.trace.iterations_used, 2u);
}

TEST(SamplingConfig, ResolvedDefaults) {
  SamplingConfig cfg;
  EXPECT_EQ(cfg.resolved_sample_size(4), 5u);
  EXPECT_EQ(cfg.resolved_patience(2000, 4), 1200u);
  EXPECT_EQ(cfg.resolved_max_iterations(2000, 4), 12000u);
  EXPECT_EQ(cfg.resolved_patience(1, 4), 1u);
  EXPECT_EQ(cfg.resolved_max_iterations(1, 4), 1000u);
  cfg.patience = 7;
  cfg.max_iterations = 9;
  EXPECT_EQ(cfg.resolved_patience(2000, 4), 7u);
  EXPECT_EQ(cfg.resolved_max_iterations(2000, 4), 9u);
}

TEST(SamplingConfig, Validation) {
  SamplingConfig cfg;
  EXPECT_NO_THROW(cfg.validate(2));
  cfg.eps_r = -1.0;
  EXPECT_THROW(cfg.validate(2), InvalidArgument);
  cfg = {};
  cfg.eps_a = 0.0;
  EXPECT_THROW(cfg.validate(2), InvalidArgument);
  cfg = {};
  cfg.sample_size = 1;
  EXPECT_THROW(cfg.validate(2), InvalidArgument);
}

TEST(TraceCsv, HeaderAndRows) {
  const auto data = to_matrix(test_support::gaussian_points(100, 2, 3));
  SamplingConfig cfg;
  cfg.rng_seed = 9;
  const auto out = train_sampled(data, KernelSpec::gaussian(1.0), 0.001, cfg);
  std::ostringstream csv;
  write_trace_csv(csv, out.trace);
  std::istringstream in(csv.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "iteration,r_squared,master_size,center_0,center_1");
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, out.trace.iterations_used);
}
