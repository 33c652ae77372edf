#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ktchart/ktchart.hpp"

namespace ktchart::cli {

namespace {

using nlohmann::json;

/// A finished output: written to `out` when the path is empty or "-",
/// otherwise to a sibling temporary that is renamed into place.
struct PendingOutput {
  std::string path;
  std::string content;
};

bool to_stdout(const std::string& path) { return path.empty() || path == "-"; }

void commit(const std::vector<PendingOutput>& outputs, std::ostream& out) {
  namespace fs = std::filesystem;
  std::vector<std::pair<fs::path, fs::path>> staged;
  try {
    for (const auto& o : outputs) {
      if (to_stdout(o.path)) continue;
      const fs::path target(o.path);
      fs::path temp = target;
      temp += ".partial";
      std::ofstream file(temp, std::ios::binary | std::ios::trunc);
      if (!file) throw IoError("cannot open '" + o.path + "' for writing");
      staged.emplace_back(temp, target);
      file << o.content;
      file.close();
      if (!file) throw IoError("write to '" + o.path + "' failed");
    }
    for (const auto& [temp, target] : staged) fs::rename(temp, target);
  } catch (...) {
    std::error_code ec;
    for (const auto& [temp, target] : staged) fs::remove(temp, ec);
    throw;
  }
  for (const auto& o : outputs) {
    if (to_stdout(o.path)) out << o.content << std::flush;
  }
}

IngestPolicy ingest_policy(const std::string& on_missing, std::optional<std::size_t> dim = std::nullopt) {
  IngestPolicy policy;
  if (on_missing == "skip") {
    policy.on_missing = RowPolicy::skip_row;
    policy.on_non_numeric = RowPolicy::skip_row;
  } else if (on_missing != "error") {
    throw InvalidArgument("--on-missing must be 'error' or 'skip', got '" + on_missing + "'");
  }
  policy.expected_dim = dim;
  return policy;
}

std::string ingest_note(const IngestSummary& s) {
  return "rows_in=" + std::to_string(s.rows_in) + " rows_out=" + std::to_string(s.rows_out) +
         " skipped_missing=" + std::to_string(s.skipped_missing) +
         " skipped_non_numeric=" + std::to_string(s.skipped_non_numeric);
}

double positive_number(const std::string& text, const char* flag) {
  const auto v = parse_double(text);
  if (!v || !(*v > 0.0)) {
    throw InvalidArgument(std::string(flag) + " must be 'auto' or a positive number, got '" + text + "'");
  }
  return *v;
}

std::string kernel_note(const KernelSpec& k) {
  if (k.kind() == KernelKind::linear) return "linear";
  return "gaussian(s=" + format_double(k.bandwidth()) + ")";
}

std::string_view to_string(Position p) {
  switch (p) {
    case Position::inside:
      return "inside";
    case Position::boundary:
      return "boundary";
    case Position::outside:
      return "outside";
  }
  return "unknown";
}

// ---- simulate -------------------------------------------------------------

std::vector<double> doubles(const json& j, const char* field) {
  if (!j.is_array()) throw FormatError(field, "must be an array of numbers");
  std::vector<double> v;
  for (const auto& x : j) {
    if (!x.is_number()) throw FormatError(field, "must be an array of numbers");
    v.push_back(x.get<double>());
  }
  return v;
}

SegmentSpec parse_segment(const json& j, std::size_t index) {
  if (!j.is_object()) throw FormatError("segments[" + std::to_string(index) + "]", "must be an object");
  SegmentSpec s;
  s.label = j.value("label", "segment" + std::to_string(index + 1));
  if (!j.contains("length") || !j["length"].is_number_unsigned()) {
    throw FormatError("length", "segment '" + s.label + "' needs a non-negative integer length");
  }
  s.length = j["length"].get<std::size_t>();
  if (!j.contains("mean")) throw FormatError("mean", "segment '" + s.label + "' needs a mean");
  s.mean = doubles(j["mean"], "mean");
  s.scale = j.contains("scale") ? doubles(j["scale"], "scale") : std::vector<double>(s.mean.size(), 1.0);
  if (j.contains("correlation")) {
    std::vector<double> flat;
    for (const auto& row : j["correlation"]) {
      const auto r = doubles(row, "correlation");
      flat.insert(flat.end(), r.begin(), r.end());
    }
    s.correlation = std::move(flat);
  }
  if (j.contains("fault")) {
    const json& f = j["fault"];
    FaultSpec fault;
    fault.kind = parse_fault_kind(f.at("kind").get<std::string>());
    fault.magnitude = f.at("magnitude").get<double>();
    fault.onset = f.value("onset", std::size_t{0});
    if (f.contains("channels")) fault.channels = f["channels"].get<std::vector<std::size_t>>();
    s.fault = std::move(fault);
  }
  if (j.contains("mixture")) {
    const json& m = j["mixture"];
    s.mixture = MixtureSpec{m.at("weight").get<double>(), doubles(m.at("alternate_mean"), "alternate_mean")};
  }
  return s;
}

std::vector<SegmentSpec> load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario '" + path + "'");
  const json doc = json::parse(in);
  if (!doc.contains("segments") || !doc["segments"].is_array() || doc["segments"].empty()) {
    throw FormatError("segments", "scenario needs a non-empty segments array");
  }
  std::vector<SegmentSpec> segments;
  for (std::size_t i = 0; i < doc["segments"].size(); ++i) segments.push_back(parse_segment(doc["segments"][i], i));
  return segments;
}

struct SimulateArgs {
  std::string scenario;
  std::string output;
  std::string boundaries;
  std::size_t rows = 1000;
  std::size_t dim = 2;
  std::uint64_t seed = 1;
};

int simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
  std::vector<SegmentSpec> segments;
  if (a.scenario.empty()) {
    if (a.rows == 0 || a.dim == 0) throw InvalidArgument("--rows and --dim must be positive");
    segments.push_back({"in_control", a.rows, std::vector<double>(a.dim, 0.0), std::vector<double>(a.dim, 1.0),
                        std::nullopt, std::nullopt, std::nullopt});
  } else {
    segments = load_scenario(a.scenario);
  }
  for (const auto& s : segments) s.validate();

  err << "ktchart simulate: segments=" << segments.size() << " dim=" << segments.front().dim()
      << " seed=" << a.seed << (a.scenario.empty() ? "" : " scenario=" + a.scenario) << '\n';

  const Stream stream = compose_stream(segments, a.seed);
  std::ostringstream data;
  write_observations(data, stream.data);
  std::vector<PendingOutput> outputs{{a.output, data.str()}};
  if (!a.boundaries.empty()) {
    std::ostringstream b;
    write_boundaries(b, stream.boundaries);
    outputs.push_back({a.boundaries, b.str()});
  }
  commit(outputs, out);
  err << "ktchart simulate: wrote " << stream.data.rows() << " rows\n";
  return kExitOk;
}

// ---- train ----------------------------------------------------------------

struct TrainArgs {
  std::string input;
  std::string model;
  std::string output;
  std::string svdd_model;
  std::size_t window_n = 500;
  std::size_t overlap_m = 150;
  std::string bandwidth = "auto";
  std::string center_bandwidth = "linear";
  double fraction_f = 0.001;
  double center_fraction_f = 0.001;
  std::size_t sample_size = 0;
  std::uint64_t seed = 1;
  std::string on_missing = "error";
  bool warnings = true;
};

int train(const TrainArgs& a, std::ostream& out, std::ostream& err) {
  PhaseIConfig cfg;
  cfg.window = WindowSpec(a.window_n, a.overlap_m);
  SvddParams::for_count(a.fraction_f, 1);
  SvddParams::for_count(a.center_fraction_f, 1);
  cfg.fraction_f = a.fraction_f;
  cfg.center_fraction_f = a.center_fraction_f;
  cfg.sampling.sample_size = a.sample_size;
  cfg.sampling.rng_seed = a.seed;
  cfg.warnings = a.warnings;
  const std::optional<double> fixed_s =
      a.bandwidth == "auto" ? std::nullopt : std::optional(positive_number(a.bandwidth, "--bandwidth"));
  if (a.center_bandwidth == "linear") {
    cfg.center_kernel = KernelSpec::linear();
  } else if (a.center_bandwidth == "auto") {
    cfg.center_kernel = std::nullopt;
  } else {
    cfg.center_kernel = KernelSpec::gaussian(positive_number(a.center_bandwidth, "--center-bandwidth"));
  }
  const IngestPolicy policy = ingest_policy(a.on_missing);

  const IngestResult ingest = read_observations_file(a.input, policy);
  const ObservationMatrix& data = ingest.observations;
  cfg.sampling.validate(data.dim());
  const std::size_t windows = window_count(data.rows(), cfg.window);
  if (windows < 2) throw InvalidArgument("Phase I data must hold at least two complete windows");
  cfg.window_kernel = KernelSpec::gaussian(
      fixed_s ? *fixed_s : median_distance_bandwidth(data, derive_seed(a.seed, 0, seed_domain::bandwidth)));

  const std::size_t sample = cfg.sampling.resolved_sample_size(data.dim());
  err << "ktchart train: input=" << a.input << " rows=" << data.rows() << " dim=" << data.dim() << " n=" << a.window_n
      << " m=" << a.overlap_m << " windows=" << windows << " kernel=" << kernel_note(cfg.window_kernel)
      << " bandwidth_source=" << (fixed_s ? "flag" : "median") << " f=" << format_double(a.fraction_f)
      << " center_f=" << format_double(a.center_fraction_f) << " sample_size=" << sample
      << " C=" << format_double(SvddParams::for_count(a.fraction_f, sample).penalty)
      << " patience=" << cfg.sampling.resolved_patience(a.window_n, data.dim())
      << " max_iterations=" << cfg.sampling.resolved_max_iterations(a.window_n, data.dim()) << " seed=" << a.seed
      << " warnings=" << (a.warnings ? "on" : "off") << " on_missing=" << a.on_missing << ' '
      << ingest_note(ingest.summary) << '\n';

  const PhaseIResult result = phase1(data, cfg);
  const PhaseIModel& m = result.model;
  err << "ktchart train: center_kernel=" << kernel_note(m.center_kernel)
      << " center_C=" << format_double(m.center_model.params().penalty)
      << " a_ucl=" << format_double(m.a_chart.ucl) << " r2_mean=" << format_double(m.dispersion.mean)
      << " r2_sigma=" << format_double(m.dispersion.sigma)
      << " center_fallback=" << (m.center_model.threshold_fallback() ? 1 : 0) << '\n';

  std::vector<PendingOutput> outputs;
  std::ostringstream model_text;
  save_phase1_model(model_text, m);
  outputs.push_back({a.model, model_text.str()});
  if (!a.output.empty()) {
    std::ostringstream chart;
    write_chart(chart, result.points);
    outputs.push_back({a.output, chart.str()});
  }
  if (!a.svdd_model.empty()) {
    SamplingConfig sampling = cfg.sampling;
    sampling.rng_seed = derive_seed(a.seed, 0, seed_domain::phase1_window);
    const SampledModel whole = train_sampled(data, cfg.window_kernel, a.fraction_f, sampling, cfg.solver);
    std::ostringstream svdd_text;
    save_svdd_model(svdd_text, whole.model);
    outputs.push_back({a.svdd_model, svdd_text.str()});
    err << "ktchart train: svdd_model support_vectors=" << whole.model.support_count()
        << " r_squared=" << format_double(whole.model.r_squared()) << '\n';
  }
  commit(outputs, out);
  return kExitOk;
}

// ---- monitor --------------------------------------------------------------

struct MonitorArgs {
  std::string input;
  std::string model;
  std::string output;
  std::string on_missing = "error";
};

int monitor(const MonitorArgs& a, std::ostream& out, std::ostream& err) {
  auto model = std::make_shared<const PhaseIModel>(load_phase1_model_file(a.model));
  const std::size_t dim = model->center_model.dim();
  const IngestPolicy policy = ingest_policy(a.on_missing, dim);

  std::ifstream in(a.input);
  if (!in) throw IoError("cannot open '" + a.input + "' for reading");
  ObservationReader reader(in, policy);
  Phase2Monitor monitor(model);

  const PhaseIConfig& c = model->config;
  err << "ktchart monitor: model=" << a.model << " input=" << a.input << " dim=" << dim
      << " n=" << c.window.length() << " m=" << c.window.overlap() << " kernel=" << kernel_note(c.window_kernel)
      << " f=" << format_double(c.fraction_f)
      << " sample_size=" << c.sampling.resolved_sample_size(dim) << " seed=" << c.sampling.rng_seed
      << " on_missing=" << a.on_missing << '\n';

  std::vector<ChartPoint> points;
  write_chart_header(out);
  out.flush();
  while (auto row = reader.next()) {
    if (auto point = monitor.push(*row)) {
      write_chart_row(out, *point);
      out.flush();
      points.push_back(*point);
    }
  }

  std::size_t a_out = 0;
  std::size_t r2_out = 0;
  for (const auto& p : points) {
    a_out += p.a_status == AStatus::out_of_control;
    r2_out += p.r2_status == R2Status::out_high || p.r2_status == R2Status::out_low;
  }
  err << "ktchart monitor: observations=" << monitor.observations_seen() << " windows=" << points.size()
      << " a_out=" << a_out << " r2_out=" << r2_out << " peak_buffered=" << monitor.peak_buffered()
      << " trailing=" << monitor.buffered() << ' ' << ingest_note(reader.summary()) << '\n';

  if (!to_stdout(a.output)) {
    std::ostringstream chart;
    write_chart(chart, points);
    commit({{a.output, chart.str()}}, out);
  }
  return kExitOk;
}

// ---- score ----------------------------------------------------------------

struct ScoreArgs {
  std::string input;
  std::string model;
  std::string output;
  std::string on_missing = "error";
};

int score(const ScoreArgs& a, std::ostream& out, std::ostream& err) {
  const SvddModel model = load_svdd_model_file(a.model);
  const IngestResult ingest = read_observations_file(a.input, ingest_policy(a.on_missing, model.dim()));
  err << "ktchart score: model=" << a.model << " input=" << a.input << " dim=" << model.dim()
      << " kernel=" << kernel_note(model.kernel()) << " r_squared=" << format_double(model.r_squared()) << ' '
      << ingest_note(ingest.summary) << '\n';

  std::ostringstream text;
  text << "row,dist2,position\n";
  for (std::size_t i = 0; i < ingest.observations.rows(); ++i) {
    const auto z = ingest.observations.row(i);
    text << (i + 1) << ',' << format_double(model.score(z)) << ',' << to_string(model.classify(z)) << '\n';
  }
  commit({{a.output, text.str()}}, out);
  return kExitOk;
}

// ---- plot -----------------------------------------------------------------

struct PlotArgs {
  std::string input;
  std::string model;
  std::string output;
  std::string title;
};

int plot(const PlotArgs& a, std::ostream& out, std::ostream& err) {
  const PhaseIModel model = load_phase1_model_file(a.model);
  std::ifstream in(a.input);
  if (!in) throw IoError("cannot open '" + a.input + "' for reading");
  const std::vector<ChartPoint> points = read_chart(in);
  err << "ktchart plot: model=" << a.model << " input=" << a.input << " points=" << points.size() << '\n';

  RenderOptions options;
  options.title = a.title;
  std::ostringstream svg;
  render_charts(svg, points, model.a_chart, model.r2_chart, options);
  commit({{a.output, svg.str()}}, out);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"SVDD-based K_T control charts for multivariate streams", "ktchart"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Write a seeded synthetic observation CSV");
  sim_cmd->add_option("--scenario", sim.scenario, "JSON file with a segments array")->check(CLI::ExistingFile);
  sim_cmd->add_option("--output", sim.output, "Observation CSV (stdout when omitted)");
  sim_cmd->add_option("--boundaries", sim.boundaries, "Segment start rows, one per line");
  sim_cmd->add_option("--rows", sim.rows, "Rows without a scenario")->capture_default_str();
  sim_cmd->add_option("--dim", sim.dim, "Channels without a scenario")->capture_default_str();
  sim_cmd->add_option("--seed", sim.seed, "Base seed")->capture_default_str();

  TrainArgs tr;
  auto* train_cmd = app.add_subcommand("train", "Build Phase I charts from in-control observations");
  train_cmd->add_option("--input", tr.input, "Phase I observation CSV")->required()->check(CLI::ExistingFile);
  train_cmd->add_option("--model", tr.model, "Phase I model file to write")->required();
  train_cmd->add_option("--output", tr.output, "Phase I chart CSV");
  train_cmd->add_option("--svdd-model", tr.svdd_model, "Also write one SVDD model over all rows");
  train_cmd->add_option("--window-n", tr.window_n, "Window length n")->capture_default_str();
  train_cmd->add_option("--overlap-m", tr.overlap_m, "Window overlap m")->capture_default_str();
  train_cmd->add_option("--bandwidth", tr.bandwidth, "Window kernel bandwidth: auto or s")->capture_default_str();
  train_cmd->add_option("--center-bandwidth", tr.center_bandwidth, "Center kernel: linear, auto or s")
      ->capture_default_str();
  train_cmd->add_option("--fraction-f", tr.fraction_f, "Outlier fraction f")->capture_default_str();
  train_cmd->add_option("--center-fraction-f", tr.center_fraction_f, "Outlier fraction for the center model")
      ->capture_default_str();
  train_cmd->add_option("--sample-size", tr.sample_size, "Sampling trainer sample size (0: d + 1)")
      ->capture_default_str();
  train_cmd->add_option("--seed", tr.seed, "Base seed")->capture_default_str();
  train_cmd->add_option("--on-missing", tr.on_missing, "error or skip")->capture_default_str();
  train_cmd->add_option("--warnings", tr.warnings, "2 sigma warning limits on the R^2 chart")->capture_default_str();

  MonitorArgs mon;
  auto* mon_cmd = app.add_subcommand("monitor", "Stream Phase II observations against a Phase I model");
  mon_cmd->add_option("--input", mon.input, "Phase II observation CSV")->required()->check(CLI::ExistingFile);
  mon_cmd->add_option("--model", mon.model, "Phase I model file")->required()->check(CLI::ExistingFile);
  mon_cmd->add_option("--output", mon.output, "Final chart CSV");
  mon_cmd->add_option("--on-missing", mon.on_missing, "error or skip")->capture_default_str();

  ScoreArgs sc;
  auto* score_cmd = app.add_subcommand("score", "Squared distance of each row to an SVDD model center");
  score_cmd->add_option("--input", sc.input, "Observation CSV")->required()->check(CLI::ExistingFile);
  score_cmd->add_option("--model", sc.model, "SVDD model file")->required()->check(CLI::ExistingFile);
  score_cmd->add_option("--output", sc.output, "Score CSV (stdout when omitted)");
  score_cmd->add_option("--on-missing", sc.on_missing, "error or skip")->capture_default_str();

  PlotArgs pl;
  auto* plot_cmd = app.add_subcommand("plot", "Render a chart CSV with its model limits as SVG");
  plot_cmd->add_option("--input", pl.input, "Chart CSV")->required()->check(CLI::ExistingFile);
  plot_cmd->add_option("--model", pl.model, "Phase I model file")->required()->check(CLI::ExistingFile);
  plot_cmd->add_option("--output", pl.output, "SVG file (stdout when omitted)");
  plot_cmd->add_option("--title", pl.title, "Title embedded in the SVG");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "ktchart: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*sim_cmd) return simulate(sim, out, err);
    if (*train_cmd) return train(tr, out, err);
    if (*mon_cmd) return monitor(mon, out, err);
    if (*score_cmd) return score(sc, out, err);
    if (*plot_cmd) return plot(pl, out, err);
  } catch (const InvalidArgument& e) {
    err << "ktchart: invalid argument: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    err << "ktchart: I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const DataError& e) {
    err << "ktchart: data error: " << e.what() << '\n';
    return kExitIo;
  } catch (const FormatError& e) {
    err << "ktchart: format error: " << e.what() << '\n';
    return kExitIo;
  } catch (const json::exception& e) {
    err << "ktchart: scenario error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "ktchart: I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const NumericalError& e) {
    err << "ktchart: numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "ktchart: internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitUsage;
}

}  // namespace ktchart::cli
