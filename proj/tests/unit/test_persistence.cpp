#include <gtest/gtest.h>

#include <sstream>
#include <string>

#include "ktchart/error.hpp"
#include "ktchart/persistence.hpp"
#include "ktchart/simulate.hpp"
#include "support.hpp"

using namespace ktchart;

namespace {

SvddModel sample_model() {
  const auto data = test_support::to_matrix(test_support::gaussian_points(80, 3, 4));
  return train_full(data, KernelSpec::gaussian(1.3), 0.05);
}

PhaseIModel sample_phase1() {
  PhaseIConfig cfg;
  cfg.window = WindowSpec(50, 10);
  cfg.window_kernel = KernelSpec::gaussian(2.0);
  cfg.sampling.rng_seed = 5;
  const auto data = gen_segment({"n", 600, {0.0, 0.0}, {1.0, 1.0}, {}, {}, {}}, 3);
  return phase1(data, cfg).model;
}

std::string saved(const SvddModel& m) {
  std::ostringstream out;
  save_svdd_model(out, m);
  return out.str();
}

std::string saved(const PhaseIModel& m) {
  std::ostringstream out;
  save_phase1_model(out, m);
  return out.str();
}

SvddModel load_svdd(const std::string& text) {
  std::istringstream in(text);
  return load_svdd_model(in);
}

PhaseIModel load_phase1(const std::string& text) {
  std::istringstream in(text);
  return load_phase1_model(in);
}

std::string replace_line(std::string text, const std::string& key, const std::string& line) {
  const auto pos = text.find("\n" + key + " ");
  const auto end = text.find('\n', pos + 1);
  return text.replace(pos + 1, end - pos - 1, line);
}

}  // namespace

TEST(Persistence, SvddRoundTripPreservesScores) {
  const auto model = sample_model();
  const auto back = load_svdd(saved(model));
  EXPECT_EQ(back.r_squared(), model.r_squared());
  EXPECT_EQ(back.offset(), model.offset());
  EXPECT_EQ(test_support::vec(back.alphas()), test_support::vec(model.alphas()));
  for (const auto& z : test_support::uniform_points(100, 3, 12, -3, 3)) {
    EXPECT_LE(std::abs(back.score(z) - model.score(z)), 1e-12);
    EXPECT_EQ(back.classify(z), model.classify(z));
  }
  EXPECT_EQ(saved(back), saved(model));
}

TEST(Persistence, LinearKernelRoundTrip) {
  const auto model = train_full(ObservationMatrix::from_rows({{0, 0}, {1, 0}, {0, 1}, {1, 1}}),
                                KernelSpec::linear(), 0.001);
  const auto back = load_svdd(saved(model));
  EXPECT_EQ(back.kernel().kind(), KernelKind::linear);
  EXPECT_EQ(back.score(std::vector<double>{3, 3}), model.score(std::vector<double>{3, 3}));
}

TEST(Persistence, Phase1RoundTripPreservesStatuses) {
  const auto model = sample_phase1();
  const auto back = load_phase1(saved(model));
  EXPECT_EQ(saved(back), saved(model));
  EXPECT_EQ(back.windows.size(), model.windows.size());
  EXPECT_EQ(back.a_chart.ucl, model.a_chart.ucl);
  EXPECT_EQ(*back.r2_chart.uwl, *model.r2_chart.uwl);
  for (std::size_t i = 0; i < model.windows.size(); ++i) {
    const auto& w = model.windows[i];
    const auto p = make_chart_point(model, w.index, {w.start, w.end}, w.model);
    const auto q = make_chart_point(back, back.windows[i].index, {back.windows[i].start, back.windows[i].end},
                                    back.windows[i].model);
    EXPECT_LE(std::abs(p.center_dist - q.center_dist), 1e-12);
    EXPECT_EQ(p.a_status, q.a_status);
    EXPECT_EQ(p.r2_status, q.r2_status);
  }
}

TEST(Persistence, TruncatedFilesRejected) {
  const std::string text = saved(sample_model());
  for (std::size_t cut : {std::size_t{0}, text.size() / 3, text.size() / 2, text.size() - 5}) {
    EXPECT_THROW(load_svdd(text.substr(0, cut)), FormatError) << cut;
  }
  const std::string p1 = saved(sample_phase1());
  EXPECT_THROW(load_phase1(p1.substr(0, p1.size() / 2)), FormatError);
  EXPECT_THROW(load_phase1(p1.substr(0, p1.size() - 3)), FormatError);
}

TEST(Persistence, VersionMismatchNamesField) {
  std::string text = saved(sample_model());
  text.replace(0, text.find('\n'), "ktchart-svdd 2");
  try {
    load_svdd(text);
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_EQ(e.field(), "version");
  }
}

TEST(Persistence, MalformedFieldNamed) {
  const std::string text = saved(sample_model());
  try {
    load_svdd(replace_line(text, "r_squared", "r_squared banana"));
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_EQ(e.field(), "r_squared");
  }
  try {
    load_svdd(replace_line(text, "kernel", "kernel cubic 1"));
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_EQ(e.field(), "kernel");
  }
}

TEST(Persistence, InconsistentCoefficientsRejected) {
  const std::string text = saved(sample_model());
  const auto pos = text.find("\nsv ");
  const auto end = text.find(' ', pos + 4);
  std::string broken = text;
  broken.replace(pos + 4, end - pos - 4, "0.9");
  EXPECT_THROW(load_svdd(broken), FormatError);
}

TEST(Persistence, DetectKind) {
  std::istringstream a(saved(sample_model()));
  EXPECT_EQ(detect_model_kind(a), ModelFileKind::svdd);
  EXPECT_NO_THROW(load_svdd_model(a));
  std::istringstream b(saved(sample_phase1()));
  EXPECT_EQ(detect_model_kind(b), ModelFileKind::phase1);
  std::istringstream c("hello 1\n");
  EXPECT_THROW(detect_model_kind(c), FormatError);
}

TEST(Persistence, MissingFileIsIoError) {
  EXPECT_THROW(load_svdd_model_file("/nonexistent/dir/model.txt"), IoError);
}
