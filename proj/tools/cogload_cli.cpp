// cogload command-line front end. Each subcommand runs one pipeline, writes
// its outputs atomically, and leaves a manifest beside them that `replay` can
// re-run to check the output digests.

#include "cogload/config.hpp"
#include "cogload/eeg.hpp"
#include "cogload/error.hpp"
#include "cogload/gaze.hpp"
#include "cogload/io.hpp"
#include "cogload/learn.hpp"
#include "cogload/protocol.hpp"
#include "cogload/spectral.hpp"
#include "cogload/stream.hpp"
#include "cogload/synth.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#ifndef COGLOAD_VERSION
#define COGLOAD_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using nlohmann::json;
using namespace cogload;

namespace {

// Options every subcommand accepts.
struct Common {
  std::string config_file;
  std::vector<std::string> sets;
  std::optional<std::uint64_t> seed;
  std::string manifest;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config_file, "Key-value config file")->check(CLI::ExistingFile);
  sub->add_option("--set", c.sets, "Override a config key (key=value); repeatable");
  sub->add_option("--seed", c.seed, "Random seed");
  sub->add_option("--manifest", c.manifest, "Manifest path (default: beside the output)");
}

// Defaults, then the config file, then --set, then explicit flags.
RunConfig resolve_config(const Common& c) {
  RunConfig cfg;
  if (!c.config_file.empty()) cfg.apply(read_key_values(c.config_file));
  KeyValues overrides;
  for (const auto& s : c.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw Error(Errc::ParseError, "--set expects key=value, got '" + s + "'");
    overrides[trim(std::string_view(s).substr(0, eq))] = trim(std::string_view(s).substr(eq + 1));
  }
  cfg.apply(overrides);
  if (c.seed) cfg.seed = *c.seed;
  return cfg;
}

class Run {
 public:
  Run(std::string command, std::vector<std::string> argv, const Common& common)
      : command_(std::move(command)), argv_(std::move(argv)), common_(common),
        config_(resolve_config(common)) {}

  const RunConfig& config() const { return config_; }

  void input(const fs::path& p) { inputs_.push_back(p); }

  void write(const fs::path& p, std::string_view content) {
    write_file_atomic(p, content);
    outputs_.push_back(p);
  }
  void wrote(const fs::path& p) { outputs_.push_back(p); }

  // Manifest beside `anchor` (a file, or a directory holding the outputs).
  void finish(const fs::path& anchor, bool anchor_is_dir) {
    fs::path path = common_.manifest;
    if (path.empty()) {
      path = anchor_is_dir ? anchor / "manifest.json" : fs::path(anchor.string() + ".manifest.json");
    }
    Manifest m;
    m.tool_version = COGLOAD_VERSION;
    m.command = command_;
    m.argv = argv_;
    m.working_directory = fs::current_path().string();
    m.config = config_.to_key_values();
    m.seed = config_.seed;
    for (const auto& p : inputs_) m.inputs.push_back(digest_of(p));
    for (const auto& p : outputs_) m.outputs.push_back(digest_of(p));
    write_file_atomic(path, manifest_to_json(m));
  }

 private:
  std::string command_;
  std::vector<std::string> argv_;
  Common common_;
  RunConfig config_;
  std::vector<fs::path> inputs_;
  std::vector<fs::path> outputs_;
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  if (text.empty()) return out;
  for (auto& s : split(text, ',')) {
    if (!s.empty()) out.push_back(s);
  }
  return out;
}

std::vector<double> split_doubles(const std::string& text) {
  std::vector<double> out;
  for (const auto& s : split_list(text)) out.push_back(parse_double(s));
  return out;
}

CourseOptions course_options(const RunConfig& cfg) {
  CourseOptions o;
  o.reduction = parse_reduction(cfg.reduction);
  o.prefilter_low_hz = cfg.prefilter_low_hz;
  o.prefilter_high_hz = cfg.prefilter_high_hz;
  o.filter_order = cfg.filter_order;
  o.window_s = cfg.frame_window_s;
  o.hop_s = cfg.frame_hop_s;
  if (cfg.edge_trim_s > 0.0) o.trim_edge_s = cfg.edge_trim_s;
  return o;
}

SvmParams svm_params(const RunConfig& cfg) {
  SvmParams p;
  p.C = cfg.svm_c;
  p.epochs = static_cast<int>(cfg.svm_epochs);
  p.seed = cfg.seed;
  return p;
}

// Present channels from `wanted`, or every channel when none match.
std::vector<std::string> electrodes_in(const TimeSeries& series,
                                       const std::vector<std::string>& wanted) {
  std::vector<std::string> out;
  for (const auto& w : wanted) {
    if (series.index_of(w)) out.push_back(w);
  }
  return out.empty() ? series.labels() : out;
}

TimeSeries single_channel(const TimeSeries& series, const std::vector<std::string>& electrodes) {
  const auto labels = electrodes_in(series, electrodes);
  return labels.size() == 1 ? select_channels(series, labels)
                            : channel_mean(select_channels(series, labels));
}

json band_json(const BandSpec& b) {
  return {{"center_hz", b.center_hz}, {"low_hz", b.low_hz}, {"high_hz", b.high_hz}};
}

BandSpec band_from_json(const json& j) {
  return BandSpec(j.at("center_hz").get<double>(), j.at("low_hz").get<double>(),
                  j.at("high_hz").get<double>());
}

// "8-12" -> [8, 12]
BandSpec parse_band_text(const std::string& text) {
  const auto dash = text.find('-', 1);
  if (dash == std::string::npos) throw Error(Errc::InvalidArgument, "band must look like 8-12");
  return BandSpec::range(parse_double(text.substr(0, dash)), parse_double(text.substr(dash + 1)));
}

std::string trial_label(const PursuitTrial& t) {
  return t.person_id + "_" + t.condition.cell() + "_d" + std::to_string(t.condition.difficulty) +
         "_r" + std::to_string(t.repetition_id);
}

TimeSeries pursuit_recording(const TrajectoryPath& path, const GazeTrace& gaze) {
  std::vector<std::vector<double>> data(4);
  for (std::size_t k = 0; k < path.size(); ++k) {
    data[0].push_back(path.points[k].x);
    data[1].push_back(path.points[k].y);
    const bool ok = k < gaze.valid.size() ? gaze.valid[k] : true;
    data[2].push_back(ok ? gaze.points[k].x : std::nan(""));
    data[3].push_back(ok ? gaze.points[k].y : std::nan(""));
  }
  return TimeSeries(path.rate_hz,
                    {{"path_x", "px"}, {"path_y", "px"}, {"gaze_x", "px"}, {"gaze_y", "px"}},
                    std::move(data));
}

// Generic CSV with a header row; returns columns by name.
std::map<std::string, std::vector<std::string>> read_table(const fs::path& path) {
  const auto text = read_text(path);
  std::map<std::string, std::vector<std::string>> cols;
  std::vector<std::string> names;
  std::size_t line_no = 0;
  for (const auto& raw : split(text, '\n')) {
    ++line_no;
    if (raw.empty() || raw.front() == '#') continue;
    const auto fields = split(raw, ',');
    if (names.empty()) {
      names = fields;
      continue;
    }
    if (fields.size() != names.size()) {
      throw Error(Errc::ParseError, path.string() + " line " + std::to_string(line_no) +
                                        ": expected " + std::to_string(names.size()) + " columns");
    }
    for (std::size_t i = 0; i < names.size(); ++i) cols[names[i]].push_back(fields[i]);
  }
  for (const auto& n : names) cols[n];
  return cols;
}

const std::vector<std::string>& column(const std::map<std::string, std::vector<std::string>>& t,
                                       const std::string& name, const fs::path& path) {
  const auto it = t.find(name);
  if (it == t.end()) {
    throw Error(Errc::ParseError, path.string() + " has no column '" + name + "'");
  }
  return it->second;
}

FeatureDataset restrict(FeatureDataset ds, const std::string& condition, const std::string& person) {
  if (!condition.empty()) ds = filter_condition(ds, condition);
  if (!person.empty()) ds = filter_person(ds, person);
  if (ds.size() == 0) throw Error(Errc::InvalidArgument, "no instances match the selection");
  return ds;
}

// ---------------------------------------------------------------------------

struct SynthArgs {
  std::string kind;
  std::string spec;
  std::string out;
  double alpha_hz{10.0};
  double snr{3.0};
  double duration_s{30.0};
  double rate_hz{250.0};
  std::size_t persons{10};
  std::string cells;
  std::string difficulties{"0,1,2,3"};
  std::string sigmas{"2,6,12,20"};
  std::optional<int> repetitions;
  std::optional<double> cohort_duration_s;
};

void run_synth(Run& run, const SynthArgs& a, const Common& common) {
  const auto& cfg = run.config();
  if (a.kind == "eeg" || a.kind == "gaze" || a.kind == "pupil") {
    SynthSpec spec;
    if (!a.spec.empty()) {
      spec = synth_spec_from(read_key_values(a.spec));
      run.input(a.spec);
    }
    if (common.seed || a.spec.empty()) spec.seed = cfg.seed;
    TimeSeries out;
    if (a.kind == "eeg") {
      spec.kind = SynthKind::Eeg;
      out = gen_eeg(spec);
    } else if (a.kind == "pupil") {
      spec.kind = SynthKind::Pupil;
      out = gen_pupil(spec);
    } else {
      spec.kind = SynthKind::Gaze;
      const auto path = gen_trajectory(spec.shape, spec.speed_px_s, spec.duration_s, spec.rate_hz);
      out = pursuit_recording(path, gen_gaze(path, spec.noise_sigma_px, spec.lag_ms, spec.seed));
    }
    run.write(a.out, format_recording(out));
    run.finish(a.out, false);
    std::cout << "wrote " << a.out << " (" << out.channel_count() << " channels, "
              << out.sample_count() << " samples)\n";
    return;
  }
  if (a.kind == "iaf-pair") {
    const fs::path dir = a.out;
    const std::vector<Channel> channels{{"O1", "uV"}, {"Oz", "uV"}, {"O2", "uV"}};
    SynthSpec open;
    open.duration_s = a.duration_s;
    open.rate_hz = a.rate_hz;
    open.seed = cfg.seed;
    open.channels = channels;
    open.noise_sigma = 1.0;
    SynthSpec closed = open;
    closed.seed = cfg.seed + 1;
    EegComponent alpha;
    alpha.freq_hz = a.alpha_hz;
    // Sinusoid power A^2 / 2 equals snr times the unit noise power.
    alpha.amplitude = std::sqrt(2.0 * a.snr);
    closed.components.push_back(alpha);
    run.write(dir / "eyes_open.csv", format_recording(gen_eeg(open)));
    run.write(dir / "eyes_closed.csv", format_recording(gen_eeg(closed)));
    run.finish(dir, true);
    std::cout << "wrote " << (dir / "eyes_open.csv").string() << " and "
              << (dir / "eyes_closed.csv").string() << "\n";
    return;
  }
  if (a.kind == "pursuit-cohort") {
    PursuitCohortSpec spec;
    spec.persons = a.persons;
    if (!a.cells.empty()) {
      spec.cells.clear();
      for (const auto& c : split_list(a.cells)) spec.cells.push_back(parse_cell(c));
    }
    spec.difficulties.clear();
    for (double d : split_doubles(a.difficulties)) spec.difficulties.push_back(static_cast<int>(d));
    spec.sigma_px = split_doubles(a.sigmas);
    spec.repetitions = a.repetitions;
    if (a.cohort_duration_s) spec.duration_s = *a.cohort_duration_s;
    spec.seed = cfg.seed;
    const auto trials = gen_pursuit_cohort(spec);
    const fs::path dir = a.out;
    std::string index = "file,person,shape,speed,difficulty,repetition\n";
    for (const auto& t : trials) {
      const std::string name = "trial_" + trial_label(t) + ".csv";
      run.write(dir / name, format_recording(pursuit_recording(t.path, t.gaze)));
      index += name + "," + t.person_id + "," + std::string(to_string(t.condition.shape)) + "," +
               std::string(to_string(t.condition.speed)) + "," +
               std::to_string(t.condition.difficulty) + "," + std::to_string(t.repetition_id) +
               "\n";
    }
    run.write(dir / "trials.csv", index);
    run.finish(dir, true);
    std::cout << "wrote " << trials.size() << " trials to " << dir.string() << "\n";
    return;
  }
  throw Error(Errc::InvalidArgument, "unknown synth kind '" + a.kind + "'");
}

struct IafArgs {
  std::string open, closed, out, electrodes;
};

void run_iaf(Run& run, const IafArgs& a) {
  const auto& cfg = run.config();
  const auto open = load_recording(a.open);
  const auto closed = load_recording(a.closed);
  run.input(a.open);
  run.input(a.closed);
  const auto wanted = a.electrodes.empty() ? occipital_electrodes() : split_list(a.electrodes);
  const auto band =
      detect_iaf(single_channel(open, wanted), single_channel(closed, wanted),
                 BandSpec::range(cfg.iaf_search_low_hz, cfg.iaf_search_high_hz),
                 cfg.iaf_half_width_hz, cfg.frame_window_s, cfg.frame_hop_s);
  run.write(a.out, band_json(band).dump(2) + "\n");
  run.finish(a.out, false);
  std::cout << "iaf peak " << format_double(band.center_hz) << " Hz, band "
            << format_double(band.low_hz) << "-" << format_double(band.high_hz) << " Hz\n";
}

struct BandpowerArgs {
  std::string in, out, band, iaf_json, electrodes, baseline, svg;
  bool theta{false};
};

void run_bandpower(Run& run, const BandpowerArgs& a) {
  const auto& cfg = run.config();
  const auto series = load_recording(a.in);
  run.input(a.in);
  const auto opts = course_options(cfg);
  auto course_of = [&](const TimeSeries& s) {
    if (a.theta) {
      const auto wanted = a.electrodes.empty() ? frontal_electrodes() : split_list(a.electrodes);
      return theta_course(s, electrodes_in(s, wanted), opts);
    }
    BandSpec band;
    if (!a.iaf_json.empty()) {
      band = band_from_json(json::parse(read_text(a.iaf_json)));
    } else if (!a.band.empty()) {
      band = parse_band_text(a.band);
    } else {
      throw Error(Errc::InvalidArgument, "give --band, --iaf-band or --theta");
    }
    const auto wanted = a.electrodes.empty() ? occipital_electrodes() : split_list(a.electrodes);
    return iaf_course(s, band, electrodes_in(s, wanted), opts);
  };
  if (!a.iaf_json.empty()) run.input(a.iaf_json);
  PowerCourse course = course_of(series);
  if (!a.baseline.empty()) {
    run.input(a.baseline);
    course = normalize_course(course, course_of(load_recording(a.baseline)));
  }
  run.write(a.out, format_power_course(course));
  if (!a.svg.empty()) {
    run.write(a.svg, render_svg("Band power " + format_double(course.band.low_hz) + "-" +
                                    format_double(course.band.high_hz) + " Hz",
                                "time (s)", course.normalized ? "relative power" : "power",
                                {{"power", course.frame_times_s, course.values}}));
  }
  run.finish(a.out, false);
  std::cout << "frames " << course.size() << ", mean power " << format_double(course.mean())
            << "\n";
}

struct FeaturesArgs {
  std::string trials, out, svg;
};

void run_features(Run& run, const FeaturesArgs& a) {
  const auto& cfg = run.config();
  const fs::path index_path = a.trials;
  const auto table = read_table(index_path);
  run.input(index_path);
  const auto& files = column(table, "file", index_path);
  const auto& persons = column(table, "person", index_path);
  const auto& shapes = column(table, "shape", index_path);
  const auto& speeds = column(table, "speed", index_path);
  const auto& diffs = column(table, "difficulty", index_path);
  const auto& reps = column(table, "repetition", index_path);

  std::vector<PursuitTrial> trials;
  for (std::size_t i = 0; i < files.size(); ++i) {
    const fs::path file = index_path.parent_path() / files[i];
    const auto rec = load_recording(file);
    run.input(file);
    const auto sel = select_channels(rec, {"path_x", "path_y", "gaze_x", "gaze_y"});
    PursuitTrial t;
    t.person_id = persons[i];
    t.condition = {parse_shape(shapes[i]), parse_speed_class(speeds[i]),
                   static_cast<int>(parse_double(diffs[i]))};
    t.repetition_id = static_cast<int>(parse_double(reps[i]));
    t.path.shape = t.condition.shape;
    t.path.speed_px_s = speed_px_s(t.condition.speed);
    t.path.rate_hz = rec.rate_hz();
    t.gaze.rate_hz = rec.rate_hz();
    for (std::size_t k = 0; k < rec.sample_count(); ++k) {
      t.path.points.push_back({sel.data()[0][k], sel.data()[1][k]});
      const Point2 g{sel.data()[2][k], sel.data()[3][k]};
      if (!std::isfinite(g.x) || !std::isfinite(g.y)) {
        throw Error(Errc::NoValidSamples, file.string() + ": gaze sample " + std::to_string(k) +
                                              " is missing; interpolate gaps before extraction");
      }
      t.gaze.points.push_back(g);
      t.gaze.valid.push_back(true);
    }
    trials.push_back(std::move(t));
  }
  InstanceOptions opts;
  opts.drop_head_s = cfg.pursuit_drop_head_s;
  opts.smooth_window = static_cast<std::size_t>(cfg.pursuit_smooth_window);
  opts.smooth_hop = static_cast<std::size_t>(cfg.pursuit_smooth_hop);
  opts.target_len = static_cast<std::size_t>(cfg.pursuit_instance_length);
  const auto instances =
      build_pursuit_dataset(trials, opts, parse_normalization(cfg.normalization));
  const auto ds = dataset_from_instances(instances);
  run.write(a.out, format_dataset(ds));
  if (!a.svg.empty()) {
    std::map<int, std::pair<std::vector<double>, std::size_t>> sums;
    for (const auto& inst : instances) {
      auto& [sum, count] = sums[inst.label];
      if (sum.empty()) sum.assign(inst.values.size(), 0.0);
      for (std::size_t j = 0; j < inst.values.size(); ++j) sum[j] += inst.values[j];
      ++count;
    }
    std::vector<PlotSeries> plot;
    for (auto& [label, sc] : sums) {
      PlotSeries s;
      s.label = std::to_string(label) + "-back";
      for (std::size_t j = 0; j < sc.first.size(); ++j) {
        s.x.push_back(static_cast<double>(j) / trials.front().path.rate_hz);
        s.y.push_back(sc.first[j] / static_cast<double>(sc.second));
      }
      plot.push_back(std::move(s));
    }
    run.write(a.svg, render_svg("Mean smoothed gaze deviation", "time (s)",
                                "normalized deviation", plot));
  }
  run.finish(a.out, false);
  std::cout << "instances " << ds.size() << " x " << ds.dims() << "\n";
}

struct TrainArgs {
  std::string dataset, out, condition, person;
  bool binary{false};
};

void run_train(Run& run, const TrainArgs& a) {
  const auto& cfg = run.config();
  auto ds = parse_dataset(read_text(a.dataset));
  run.input(a.dataset);
  ds = restrict(std::move(ds), a.condition, a.person);
  if (a.binary) ds = binarize_workload(ds);
  const auto model = train_linear_svm(ds, svm_params(cfg));
  const auto pred = predict(model, ds.X);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < ds.size(); ++i) correct += pred[i] == ds.y[i];
  run.write(a.out, model_to_json(model) + "\n");
  run.finish(a.out, false);
  std::cout << "trained " << to_string(model.kind) << " on " << ds.size()
            << " instances, training accuracy "
            << format_double(static_cast<double>(correct) / static_cast<double>(ds.size()))
            << "\n";
}

struct EvaluateArgs {
  std::string dataset, out, model, condition, person, scheme;
  bool binary{false};
};

void run_evaluate(Run& run, const EvaluateArgs& a) {
  const auto& cfg = run.config();
  auto ds = parse_dataset(read_text(a.dataset));
  run.input(a.dataset);
  const std::string scheme = a.scheme.empty() ? cfg.scheme : a.scheme;
  const Trainer trainer = svm_trainer(svm_params(cfg));
  if (scheme == "table") {
    const auto rows = pursuit_condition_table(ds, trainer, cfg.seed);
    const auto text = format_condition_table(rows);
    run.write(a.out, text);
    run.finish(a.out, false);
    std::cout << text;
    return;
  }
  ds = restrict(std::move(ds), a.condition, a.person);
  if (a.binary) ds = binarize_workload(ds);
  json out;
  double headline = 0.0;
  switch (parse_scheme(scheme)) {
    case EvalScheme::LopoClassify: {
      const auto report = leave_one_person_out(ds, trainer);
      out = json::parse(report_to_json(report));
      headline = report.pooled.accuracy;
      break;
    }
    case EvalScheme::LoroClassify: {
      if (a.condition.empty()) {
        throw Error(Errc::InvalidArgument, "loro needs --condition to pick the fold count");
      }
      const auto res = person_dependent_eval(ds, parse_cell(a.condition), trainer, cfg.seed);
      out["scheme"] = "loro-classify";
      out["folds"] = res.folds;
      out["seed"] = cfg.seed;
      out["mean_accuracy"] = res.mean.accuracy;
      out["mean_macro_f1"] = res.mean.macro_f1;
      json persons = json::array();
      for (const auto& r : res.per_person) persons.push_back(json::parse(report_to_json(r)));
      out["per_person"] = persons;
      headline = res.mean.accuracy;
      break;
    }
    case EvalScheme::Holdout: {
      if (a.model.empty()) throw Error(Errc::InvalidArgument, "holdout needs --model");
      const auto model = model_from_json(read_text(a.model));
      run.input(a.model);
      EvalReport report;
      report.scheme = EvalScheme::Holdout;
      report.classes = model.classes;
      report.confusion.assign(model.classes.size(),
                              std::vector<std::size_t>(model.classes.size(), 0));
      const auto pred = predict(model, ds.X);
      auto index = [&](double label) {
        const auto it = std::find(model.classes.begin(), model.classes.end(),
                                  static_cast<int>(std::lround(label)));
        if (it == model.classes.end()) {
          throw Error(Errc::InvalidArgument, "label " + format_double(label) + " unknown to the model");
        }
        return static_cast<std::size_t>(it - model.classes.begin());
      };
      for (std::size_t i = 0; i < ds.size(); ++i) {
        ++report.confusion[index(ds.y[i])][index(pred[i])];
        report.truth.push_back(ds.y[i]);
        report.predicted.push_back(pred[i]);
      }
      report.pooled = classification_metrics(report.confusion);
      report.fold_average = report.pooled;
      out = json::parse(report_to_json(report));
      headline = report.pooled.accuracy;
      break;
    }
    case EvalScheme::LopoRegress:
      throw Error(Errc::InvalidArgument, "use the regress subcommand for regression");
  }
  run.write(a.out, out.dump(2) + "\n");
  run.finish(a.out, false);
  std::cout << "scheme " << scheme << ", accuracy " << format_double(headline) << "\n";
}

struct RegressArgs {
  std::string in, out, x, y, person{"person"};
};

void run_regress(Run& run, const RegressArgs& a) {
  const auto table = read_table(a.in);
  run.input(a.in);
  const auto& xs = column(table, a.x, a.in);
  const auto& ys = column(table, a.y, a.in);
  FeatureDataset ds;
  ds.X.resize(static_cast<Eigen::Index>(xs.size()), 1);
  std::vector<double> xv;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    xv.push_back(parse_double(xs[i]));
    ds.X(static_cast<Eigen::Index>(i), 0) = xv.back();
    ds.y.push_back(parse_double(ys[i]));
  }
  const auto fit = fit_linear_regression(xv, ds.y);
  const auto& d = *fit.regression;
  json out;
  out["fit"] = json::parse(model_to_json(fit));
  out["table"] = {{"F", d.f}, {"R", d.r}, {"R2", d.r2}, {"RMSE", d.rmse}, {"n", d.n}};
  if (table.count(a.person)) {
    ds.person_ids = table.at(a.person);
    out["lopo"] = json::parse(report_to_json(lopo_regression(ds)));
  }
  run.write(a.out, out.dump(2) + "\n");
  run.finish(a.out, false);
  std::cout << "F,R,R2,RMSE\n"
            << format_double(d.f) << "," << format_double(d.r) << "," << format_double(d.r2) << ","
            << format_double(d.rmse) << "\n";
}

struct StreamArgs {
  std::string in, model, out, pipeline{"pupil-window"}, initial{"difficult"}, band{"8-12"};
  std::optional<double> window_s, hop_s;
  double chunk_s{1.0};
  double task_period_s{0.0};
};

void run_stream(Run& run, const StreamArgs& a) {
  const auto& cfg = run.config();
  const auto rec = load_recording(a.in);
  const auto model = model_from_json(read_text(a.model));
  run.input(a.in);
  run.input(a.model);
  StreamConfig sc;
  sc.pipeline = parse_pipeline(a.pipeline);
  sc.rate_hz = rec.rate_hz();
  sc.channels = rec.channels();
  sc.window_s = a.window_s.value_or(cfg.pupil_window_s);
  sc.hop_s = a.hop_s.value_or(sc.window_s);
  sc.t0_s = rec.t0_s();
  sc.capacity_s = cfg.stream_capacity_s;
  sc.band = parse_band_text(a.band);
  DifficultyController ctl;
  ctl.current = parse_difficulty(a.initial);
  ctl.task_period_s = a.task_period_s;
  ctl.task_origin_s = rec.t0_s();
  ctl.high_label = model.classes.empty() ? 1.0 : model.classes.back();
  StreamSession session(sc, model, ctl);

  // Feed the recording in fixed-size chunks, as a device would deliver it.
  const auto chunk = static_cast<std::size_t>(std::max(1.0, std::round(a.chunk_s * rec.rate_hz())));
  for (std::size_t start = 0; start < rec.sample_count(); start += chunk) {
    const std::size_t end = std::min(rec.sample_count(), start + chunk);
    std::vector<std::vector<double>> part;
    for (const auto& row : rec.data()) part.emplace_back(row.begin() + static_cast<std::ptrdiff_t>(start), row.begin() + static_cast<std::ptrdiff_t>(end));
    for (const auto& d : session.push(part)) adapt_difficulty(session, d);
  }
  run.write(a.out, session_report(session) + "\n");
  run.finish(a.out, false);
  std::cout << "decisions " << session.decisions().size() << ", difficulty switches "
            << session.commands().size() << "\n";
}

struct BlinkArgs {
  std::string in, out;
};

void run_blinks(Run& run, const BlinkArgs& a) {
  const auto& cfg = run.config();
  const auto rec = load_recording(a.in);
  run.input(a.in);
  const auto report = count_blinks(rec, cfg.blink_threshold_uv, cfg.blink_refractory_s);
  run.write(a.out, format_blink_report(report));
  run.finish(a.out, false);
  std::cout << "blinks " << report.count << ", per minute " << format_double(report.per_minute)
            << "\n";
}

int run_cli(std::vector<std::string> args);

int run_replay(const std::string& manifest_path) {
  const fs::path mp = fs::absolute(manifest_path);
  const auto m = manifest_from_json(read_text(mp));
  const auto cwd = fs::current_path();
  fs::current_path(m.working_directory);
  int status = 0;
  try {
    status = run_cli(m.argv);
  } catch (...) {
    fs::current_path(cwd);
    throw;
  }
  fs::current_path(m.working_directory);
  std::size_t mismatches = 0;
  for (const auto& f : m.outputs) {
    const auto now = fs::exists(f.path) ? sha256_file(f.path) : std::string("missing");
    if (now != f.sha256) {
      ++mismatches;
      std::cout << "MISMATCH " << f.path << "\n";
    }
  }
  fs::current_path(cwd);
  if (status != 0) return status;
  std::cout << "replayed " << m.command << ": " << m.outputs.size() - mismatches << "/"
            << m.outputs.size() << " outputs match\n";
  return mismatches == 0 ? 0 : 1;
}

void print_error(const std::string& command, const std::string& code, const std::string& message) {
  json j = {{"error", code}, {"message", message}, {"command", command}};
  std::cerr << j.dump() << "\n";
}

int run_cli(std::vector<std::string> args) {
  CLI::App app{"cogload: cognitive workload signal pipelines", "cogload"};
  app.set_version_flag("--version", COGLOAD_VERSION);
  app.require_subcommand(1);
  app.fallthrough(false);

  Common common;
  SynthArgs synth_a;
  auto* synth = app.add_subcommand("synth", "Write synthetic fixture recordings");
  add_common(synth, common);
  synth->add_option("--kind", synth_a.kind, "eeg | gaze | pupil | iaf-pair | pursuit-cohort")
      ->required()
      ->check(CLI::IsMember({"eeg", "gaze", "pupil", "iaf-pair", "pursuit-cohort"}));
  synth->add_option("--spec", synth_a.spec, "Synth spec (key-value file)")->check(CLI::ExistingFile);
  synth->add_option("--out", synth_a.out, "Output file, or directory for pairs and cohorts")->required();
  synth->add_option("--alpha-hz", synth_a.alpha_hz, "iaf-pair: alpha frequency");
  synth->add_option("--snr", synth_a.snr, "iaf-pair: alpha power over noise power");
  synth->add_option("--duration-s", synth_a.duration_s, "iaf-pair: seconds per recording");
  synth->add_option("--rate-hz", synth_a.rate_hz, "iaf-pair: sampling rate");
  synth->add_option("--persons", synth_a.persons, "pursuit-cohort: number of persons");
  synth->add_option("--cells", synth_a.cells, "pursuit-cohort: e.g. circle-fast,sine-slow");
  synth->add_option("--difficulties", synth_a.difficulties, "pursuit-cohort: N-back levels");
  synth->add_option("--sigmas", synth_a.sigmas, "pursuit-cohort: gaze noise (px) per level");
  synth->add_option("--repetitions", synth_a.repetitions, "pursuit-cohort: repetitions per cell");
  synth->add_option("--trial-s", synth_a.cohort_duration_s, "pursuit-cohort: trial length");

  IafArgs iaf_a;
  auto* iaf = app.add_subcommand("iaf-detect", "Individual alpha band from eyes open/closed");
  add_common(iaf, common);
  iaf->add_option("--open", iaf_a.open, "Eyes-open recording")->required()->check(CLI::ExistingFile);
  iaf->add_option("--closed", iaf_a.closed, "Eyes-closed recording")->required()->check(CLI::ExistingFile);
  iaf->add_option("--electrodes", iaf_a.electrodes, "Comma list (default: occipital)");
  iaf->add_option("--out", iaf_a.out, "Band JSON")->required();

  BandpowerArgs bp_a;
  auto* bp = app.add_subcommand("bandpower", "Band power course of a recording");
  add_common(bp, common);
  bp->add_option("--in", bp_a.in, "Recording")->required()->check(CLI::ExistingFile);
  bp->add_option("--band", bp_a.band, "Band as LOW-HIGH in Hz");
  bp->add_option("--iaf-band", bp_a.iaf_json, "Band JSON from iaf-detect")->check(CLI::ExistingFile);
  bp->add_flag("--theta", bp_a.theta, "Frontal theta (5 +- 2 Hz) via SSD");
  bp->add_option("--electrodes", bp_a.electrodes, "Comma list");
  bp->add_option("--baseline", bp_a.baseline, "Baseline recording for normalization")
      ->check(CLI::ExistingFile);
  bp->add_option("--svg", bp_a.svg, "Also render the course as SVG");
  bp->add_option("--out", bp_a.out, "Course CSV")->required();

  FeaturesArgs feat_a;
  auto* feat = app.add_subcommand("pursuit-features", "Pursuit instances from path/gaze recordings");
  add_common(feat, common);
  feat->add_option("--trials", feat_a.trials, "Trial index CSV")->required()->check(CLI::ExistingFile);
  feat->add_option("--svg", feat_a.svg, "Also render mean deviation per level as SVG");
  feat->add_option("--out", feat_a.out, "Dataset CSV")->required();

  TrainArgs train_a;
  auto* train = app.add_subcommand("train", "Train a linear SVM on a dataset");
  add_common(train, common);
  train->add_option("--dataset", train_a.dataset, "Dataset CSV")->required()->check(CLI::ExistingFile);
  train->add_option("--condition", train_a.condition, "Only this condition");
  train->add_option("--person", train_a.person, "Only this person");
  train->add_flag("--binary", train_a.binary, "Low (0-back) vs high (any N-back) workload");
  train->add_option("--out", train_a.out, "Model JSON")->required();

  EvaluateArgs eval_a;
  auto* eval = app.add_subcommand("evaluate", "Cross-validate on a dataset");
  add_common(eval, common);
  eval->add_option("--dataset", eval_a.dataset, "Dataset CSV")->required()->check(CLI::ExistingFile);
  eval->add_option("--scheme", eval_a.scheme, "lopo | loro | holdout | table");
  eval->add_option("--model", eval_a.model, "Model JSON for holdout")->check(CLI::ExistingFile);
  eval->add_option("--condition", eval_a.condition, "Only this condition");
  eval->add_option("--person", eval_a.person, "Only this person");
  eval->add_flag("--binary", eval_a.binary, "Low (0-back) vs high (any N-back) workload");
  eval->add_option("--out", eval_a.out, "Report JSON (CSV for table)")->required();

  RegressArgs reg_a;
  auto* reg = app.add_subcommand("regress", "Linear regression with leave-one-person-out check");
  add_common(reg, common);
  reg->add_option("--in", reg_a.in, "CSV with a header row")->required()->check(CLI::ExistingFile);
  reg->add_option("--x", reg_a.x, "Predictor column")->required();
  reg->add_option("--y", reg_a.y, "Target column")->required();
  reg->add_option("--person", reg_a.person, "Person column for leave-one-person-out");
  reg->add_option("--out", reg_a.out, "Report JSON")->required();

  StreamArgs stream_a;
  auto* stream = app.add_subcommand("stream", "Replay a recording through a streaming session");
  add_common(stream, common);
  stream->add_option("--in", stream_a.in, "Recording")->required()->check(CLI::ExistingFile);
  stream->add_option("--model", stream_a.model, "Model JSON (one feature)")->required()->check(CLI::ExistingFile);
  stream->add_option("--pipeline", stream_a.pipeline, "pupil-window | iaf-course | pursuit-deviation");
  stream->add_option("--window-s", stream_a.window_s, "Decision window");
  stream->add_option("--hop-s", stream_a.hop_s, "Decision hop");
  stream->add_option("--chunk-s", stream_a.chunk_s, "Seconds per push");
  stream->add_option("--initial", stream_a.initial, "Starting difficulty: easy | difficult");
  stream->add_option("--task-period-s", stream_a.task_period_s, "Task boundary spacing (0: immediate)");
  stream->add_option("--band", stream_a.band, "iaf-course band LOW-HIGH");
  stream->add_option("--out", stream_a.out, "Session report JSON")->required();

  BlinkArgs blink_a;
  auto* blinks = app.add_subcommand("blinks", "Count blinks on Fp1/Fp2");
  add_common(blinks, common);
  blinks->add_option("--in", blink_a.in, "Recording")->required()->check(CLI::ExistingFile);
  blinks->add_option("--out", blink_a.out, "Blink report JSON")->required();

  std::string replay_manifest;
  auto* replay = app.add_subcommand("replay", "Re-run a manifest and compare output digests");
  replay->add_option("manifest", replay_manifest, "Manifest JSON")->required()->check(CLI::ExistingFile);

  if (args.empty()) {
    std::cerr << app.help();
    return 2;
  }
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const auto* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  try {
    if (name == "replay") return run_replay(replay_manifest);
    Run run(name, args, common);
    if (name == "synth") run_synth(run, synth_a, common);
    if (name == "iaf-detect") run_iaf(run, iaf_a);
    if (name == "bandpower") run_bandpower(run, bp_a);
    if (name == "pursuit-features") run_features(run, feat_a);
    if (name == "train") run_train(run, train_a);
    if (name == "evaluate") run_evaluate(run, eval_a);
    if (name == "regress") run_regress(run, reg_a);
    if (name == "stream") run_stream(run, stream_a);
    if (name == "blinks") run_blinks(run, blink_a);
    return 0;
  } catch (const Error& e) {
    print_error(name, std::string(errc_name(e.code())), e.what());
  } catch (const json::exception& e) {
    print_error(name, "ParseError", e.what());
  } catch (const std::exception& e) {
    print_error(name, "InternalError", e.what());
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  return run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
