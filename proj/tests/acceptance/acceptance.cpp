// Acceptance run: one PASS/FAIL line per criterion. Exit status is the number
// of failing criteria. `acceptance N` runs only criterion N.

#include "cogload/eeg.hpp"
#include "cogload/error.hpp"
#include "cogload/gaze.hpp"
#include "cogload/io.hpp"
#include "cogload/learn.hpp"
#include "cogload/protocol.hpp"
#include "cogload/rng.hpp"
#include "cogload/spectral.hpp"
#include "cogload/stream.hpp"
#include "cogload/synth.hpp"

#include "json.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

using namespace cogload;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass{false};
  std::string detail;
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(double v, int digits = 4) {
  std::ostringstream os;
  os.precision(digits);
  os << v;
  return os.str();
}

double mean_of(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

// ---------------------------------------------------------------------------
// 1. IAF detection

Outcome iaf_detection() {
  Stopwatch clock;
  const double snr = 3.0;  // alpha power over broadband noise power
  std::size_t hits = 0;
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    SynthSpec open;
    open.duration_s = 30.0;
    open.seed = seed;
    open.channels = {{"O1", "uV"}, {"Oz", "uV"}, {"O2", "uV"}};
    open.noise_sigma = 1.0;
    open.components.push_back({10.0, 0.3, {}, Envelope::constant(1.0), {}, {}});
    SynthSpec closed = open;
    closed.seed = seed + 1000;
    closed.components[0].amplitude = std::sqrt(2.0 * snr);
    const auto band = detect_iaf(channel_mean(gen_eeg(open)), channel_mean(gen_eeg(closed)));
    const double err = std::abs(band.center_hz - 10.0);
    worst = std::max(worst, err);
    if (err <= 0.5 && band.low_hz == band.center_hz - 2.0 && band.high_hz == band.center_hz + 2.0) {
      ++hits;
    }
  }
  const double t = clock.seconds();
  return {hits == 100 && t < 5.0, std::to_string(hits) + "/100 within 0.5 Hz and peak +- 2 Hz, worst error " +
                                       fmt(worst) + " Hz, " + fmt(t, 3) + " s"};
}

// ---------------------------------------------------------------------------
// 2. Spectral correctness

Outcome spectral_correctness() {
  double worst_parseval = 0.0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    Rng rng(seed, stream_id("parseval"));
    const std::size_t n = 250 + rng.below(2000);
    std::vector<double> x(n);
    const double offset = rng.normal() * 5.0;
    for (auto& v : x) v = offset + rng.normal() * (1.0 + 9.0 * rng.uniform());
    const auto plan = make_window_plan(250.0, n, 1.0, 0.5);
    const auto spec = stft_power(x, 250.0, plan);
    for (std::size_t f = 0; f < spec.frames.size(); ++f) {
      // time-domain energy of the tapered frame over the taper energy
      double xw2 = 0.0, w2 = 0.0;
      for (std::size_t k = 0; k < plan.window_len; ++k) {
        const double w = std::pow(std::sin(std::numbers::pi * static_cast<double>(k) / 250.0), 2);
        xw2 += std::pow(x[plan.frame_start(f) + k] * w, 2);
        w2 += w * w;
      }
      double freq_sum = 0.0;
      for (double p : spec.frames[f]) freq_sum += p;
      worst_parseval = std::max(worst_parseval, std::abs(freq_sum / (xw2 / w2) - 1.0));
    }
  }

  std::vector<double> ratios;
  for (double amp : {0.5, 1.0, 2.0, 4.0}) {
    std::vector<double> x(2500);
    for (std::size_t k = 0; k < x.size(); ++k) {
      x[k] = amp * std::sin(2.0 * std::numbers::pi * 10.0 * static_cast<double>(k) / 250.0 + 0.3);
    }
    const auto bp = band_power(stft_power(x, 250.0, make_window_plan(250.0, x.size(), 1.0, 0.5)),
                               BandSpec::range(8.0, 12.0));
    ratios.push_back(mean_of(bp) / (amp * amp));
  }
  double spread = 0.0;
  for (double r : ratios) spread = std::max(spread, std::abs(r / ratios[1] - 1.0));
  return {worst_parseval <= 0.01 && spread <= 0.02,
          "Parseval worst " + fmt(worst_parseval * 100.0, 3) + "% over 50 signals, power/A^2 spread " +
              fmt(spread * 100.0, 3) + "%"};
}

// ---------------------------------------------------------------------------
// 3. SSD gain

double in_band_snr(std::span<const double> x, double rate) {
  const auto spec = stft_power(x, rate, make_window_plan(rate, x.size(), 1.0, 0.5));
  const double signal = mean_of(band_power(spec, BandSpec::range(8.0, 12.0)));
  const double flank = 0.5 * (mean_of(band_power(spec, BandSpec::range(5.0, 7.0))) +
                              mean_of(band_power(spec, BandSpec::range(13.0, 15.0))));
  return signal / flank;
}

Outcome ssd_gain() {
  // one 10 Hz source through a fixed mixing vector; white noise shared across
  // channels (a common reference) plus independent white noise per channel
  double worst_db = 1e9;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    SynthSpec s;
    s.duration_s = 60.0;
    s.seed = seed;
    s.channels = {{"O1", "uV"}, {"Oz", "uV"}, {"O2", "uV"}, {"Pz", "uV"}};
    s.components.push_back({10.0, 1.0, {1.0, 0.7, 0.4, 0.2}, Envelope::constant(1.0), {}, {}});
    s.noise_sources.push_back({3.0, {1.0, 1.0, 1.0, 1.0}});
    s.noise_sigma = 0.5;
    const auto x = gen_eeg(s);
    const auto band = BandSpec::range(8.0, 12.0);
    const auto r = ssd(x, band);
    const auto comp = ssd_components(x, r, 1);
    double best_raw = 0.0;
    for (std::size_t c = 0; c < x.channel_count(); ++c) {
      best_raw = std::max(best_raw, in_band_snr(x.row(c), x.rate_hz()));
    }
    const double gain_db = 10.0 * std::log10(in_band_snr(comp.row(0), x.rate_hz()) / best_raw);
    worst_db = std::min(worst_db, gain_db);
  }
  return {worst_db >= 6.0, "worst gain over best raw channel " + fmt(worst_db) + " dB over 20 seeds"};
}

// ---------------------------------------------------------------------------
// 4. Pursuit deviation oracle

Outcome deviation_oracle() {
  double worst = 0.0;
  Rng rng(4, stream_id("deviation-oracle"));
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng.below(2000);
    std::vector<Point2> path(n), gaze(n);
    for (std::size_t k = 0; k < n; ++k) {
      path[k] = {rng.uniform() * 1920.0, rng.uniform() * 1080.0};
      gaze[k] = {path[k].x + rng.normal() * 40.0, path[k].y + rng.normal() * 40.0};
    }
    const auto d = pursuit_deviation(path, gaze);
    for (std::size_t k = 0; k < n; ++k) {
      const double dx = gaze[k].x - path[k].x;
      const double dy = gaze[k].y - path[k].y;
      const double want = std::sqrt(dx * dx + dy * dy);
      if (want > 0.0) worst = std::max(worst, std::abs(d[k] - want) / want);
    }
  }
  // offset (3, 4) on a trajectory quantized to 1/1024 px so the offset is exact
  auto traj = gen_trajectory(TrajectoryShape::Rectangle, 650.0, 10.0, 250.0);
  GazeTrace g;
  g.rate_hz = traj.rate_hz;
  for (auto& p : traj.points) {
    p = {std::round(p.x * 1024.0) / 1024.0, std::round(p.y * 1024.0) / 1024.0};
    g.points.push_back({p.x + 3.0, p.y + 4.0});
    g.valid.push_back(true);
  }
  const auto five = pursuit_deviation(traj, g);
  const bool exact = std::all_of(five.begin(), five.end(), [](double v) { return v == 5.0; });
  return {worst <= 1e-9 && exact, "worst relative error " + fmt(worst, 3) +
                                      " over 1000 trace pairs; (3,4) offset exactly 5 px: " +
                                      (exact ? "yes" : "no")};
}

// ---------------------------------------------------------------------------
// 5. Workload monotonicity

Outcome monotonicity() {
  const std::vector<double> sigmas{1.0, 5.0, 10.0, 20.0};
  std::size_t runs = 0, monotone = 0;
  for (auto shape : {TrajectoryShape::Rectangle, TrajectoryShape::Circle, TrajectoryShape::Sine}) {
    for (auto speed : {SpeedClass::Slow, SpeedClass::Fast}) {
      const auto path = gen_trajectory(shape, speed_px_s(speed), 27.0, 250.0);
      for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        std::vector<PursuitTrial> trials;
        for (std::size_t i = 0; i < sigmas.size(); ++i) {
          PursuitTrial t;
          t.path = path;
          t.gaze = gen_gaze(path, sigmas[i], 0.0, splitmix64(seed * 131 + i));
          t.person_id = "P01";
          t.condition = {shape, speed, static_cast<int>(i)};
          t.repetition_id = 1;
          trials.push_back(std::move(t));
        }
        const auto inst = build_pursuit_dataset(trials);
        bool ok = true;
        for (std::size_t i = 1; i < inst.size(); ++i) {
          ok = ok && mean_of(inst[i].values) > mean_of(inst[i - 1].values);
        }
        ++runs;
        monotone += ok;
      }
    }
  }
  return {monotone == runs, std::to_string(monotone) + "/" + std::to_string(runs) +
                                " shape/speed/seed runs strictly increasing over sigma 1,5,10,20 px"};
}

// ---------------------------------------------------------------------------
// 6. Classification protocol

Outcome classification_protocol() {
  Stopwatch clock;
  // 10 persons, each with 4 low (0-back) and 4 high (3-back) trials
  PursuitCohortSpec spec;
  spec.persons = 10;
  spec.cells = {parse_cell("circle-fast"), parse_cell("sine-slow")};
  spec.difficulties = {0, 3};
  spec.sigma_px = {2.0, 20.0};
  spec.repetitions = 2;
  spec.seed = 6;
  const auto ds = binarize_workload(dataset_from_instances(build_pursuit_dataset(gen_pursuit_cohort(spec))));
  const auto trainer = svm_trainer();
  const auto lopo = leave_one_person_out(ds, trainer);
  const double acc = lopo.pooled.accuracy;

  // label-permutation baseline
  double perm_sum = 0.0;
  for (std::uint64_t s = 1; s <= 50; ++s) {
    auto shuffled = ds;
    Rng rng(s, stream_id("permutation"));
    for (std::size_t i = shuffled.y.size(); i > 1; --i) {
      std::swap(shuffled.y[i - 1], shuffled.y[rng.below(i)]);
    }
    perm_sum += leave_one_person_out(shuffled, trainer).pooled.accuracy;
  }
  const double perm = perm_sum / 50.0;
  const double half_width = 1.96 * std::sqrt(0.25 / static_cast<double>(ds.size()));
  const bool chance = std::abs(perm - 0.5) <= half_width;

  // full six-condition dataset with the protocol's repetition counts
  PursuitCohortSpec full;
  full.persons = 10;
  full.seed = 7;
  const auto full_ds = dataset_from_instances(build_pursuit_dataset(gen_pursuit_cohort(full)));
  const auto rows = pursuit_condition_table(full_ds, trainer, 7);
  const std::vector<std::pair<std::string, std::size_t>> want{
      {"rectangle-slow", 2}, {"rectangle-fast", 3}, {"circle-slow", 5},
      {"circle-fast", 7},    {"sine-slow", 2},      {"sine-fast", 3}};
  bool folds_ok = rows.size() == want.size();
  for (std::size_t i = 0; folds_ok && i < rows.size(); ++i) {
    folds_ok = rows[i].cell.name() == want[i].first && rows[i].folds == want[i].second;
  }
  // each person-dependent run uses exactly the tabled number of folds
  for (const auto& [name, k] : want) {
    const auto res = person_dependent_eval(filter_condition(full_ds, name), parse_cell(name), trainer, 7);
    for (const auto& r : res.per_person) folds_ok = folds_ok && r.folds.size() == k;
  }
  // a cell with fewer repetitions than its fold count is refused
  bool refused = false;
  try {
    auto cf = filter_condition(full_ds, "circle-fast");
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < cf.size(); ++i) {
      if (cf.repetition_ids[i] <= 6) keep.push_back(i);
    }
    person_dependent_eval(cf.subset(keep), parse_cell("circle-fast"), trainer, 7);
  } catch (const Error& e) {
    refused = e.code() == Errc::TooFewRepetitions;
  }

  const auto table = format_condition_table(rows);
  const bool table_ok = table.find("accuracy") != std::string::npos &&
                        table.find("precision") != std::string::npos &&
                        table.find("recall") != std::string::npos &&
                        table.find("f1") != std::string::npos;
  std::cout << table;
  const double t = clock.seconds();
  return {acc >= 0.99 && chance && folds_ok && refused && table_ok && t < 60.0,
          "LOPO pooled accuracy " + fmt(acc) + "; permutation mean " + fmt(perm) + " vs 0.5 +- " +
              fmt(half_width, 3) + "; folds 2/3/5/7/2/3 " + (folds_ok && refused ? "enforced" : "NOT enforced") +
              "; " + fmt(t, 3) + " s"};
}

// ---------------------------------------------------------------------------
// 7. Regression recovery

Outcome regression_recovery() {
  Rng rng(7, stream_id("regression"));
  FeatureDataset ds;
  ds.X.resize(51, 1);
  std::vector<double> x, y;
  for (int i = 0; i < 51; ++i) {
    const double xi = 10.0 * rng.uniform();
    const double yi = 0.8 * xi + 0.1 + 0.02 * rng.normal();
    x.push_back(xi);
    y.push_back(yi);
    ds.X(i, 0) = xi;
    ds.y.push_back(yi);
    char id[8];
    std::snprintf(id, sizeof id, "P%02d", i / 3 + 1);
    ds.person_ids.push_back(id);
  }
  const auto fit = fit_linear_regression(x, y);
  const auto& d = *fit.regression;
  const auto lopo = lopo_regression(ds);
  std::cout << "model,F,R,R2,RMSE,lopo_rmse,lopo_r2\n"
            << "linear," << format_double(d.f) << "," << format_double(d.r) << ","
            << format_double(d.r2) << "," << format_double(d.rmse) << ","
            << format_double(lopo.rmse) << "," << format_double(lopo.r2) << "\n";
  const double slope_err = std::abs(d.slope - 0.8) / 0.8;
  return {slope_err <= 0.01 && lopo.rmse <= 0.05 && lopo.r2 >= 0.99 && lopo.folds.size() == 17,
          "slope " + fmt(d.slope, 6) + " (" + fmt(slope_err * 100.0, 3) + "% off), LOPO RMSE " +
              fmt(lopo.rmse) + ", R2 " + fmt(lopo.r2, 6) + ", " + std::to_string(lopo.folds.size()) +
              " folds"};
}

// ---------------------------------------------------------------------------
// 8. Blink counting

TimeSeries spike_train(double duration_s, const std::vector<double>& onsets, double width_s) {
  const double rate = 250.0;
  const auto n = static_cast<std::size_t>(std::llround(duration_s * rate));
  std::vector<double> fp1(n, 5.0), fp2(n, -5.0);
  for (double t : onsets) {
    const auto a = static_cast<std::size_t>(std::llround(t * rate));
    const auto b = std::min(n, a + static_cast<std::size_t>(std::llround(width_s * rate)));
    for (std::size_t k = a; k < b; ++k) {
      fp1[k] = 320.0;
      fp2[k] = 290.0;
    }
  }
  return TimeSeries(rate, {{"Fp1", "uV"}, {"Fp2", "uV"}}, {fp1, fp2});
}

Outcome blink_counting() {
  struct Case {
    double duration_s;
    std::vector<double> onsets;
    double width_s;
    std::size_t want;
  };
  std::vector<Case> cases{{60.0, {}, 0.1, 0}, {60.0, {30.0}, 0.1, 1},
                          {30.0, {2, 4, 6, 8, 10}, 0.1, 5}, {90.0, {}, 0.1, 40},
                          // second spike 50 ms after the first merges into one blink
                          {20.0, {5.0, 5.05}, 0.02, 1}};
  for (int i = 0; i < 40; ++i) cases[3].onsets.push_back(1.0 + 2.1 * i);
  std::string detail;
  bool ok = true;
  for (const auto& c : cases) {
    const auto r = count_blinks(spike_train(c.duration_s, c.onsets, c.width_s));
    const double per_min = static_cast<double>(c.want) * 60.0 / c.duration_s;
    ok = ok && r.count == c.want && r.per_minute == per_min;
    detail += std::to_string(r.count) + "/" + std::to_string(c.want) + " ";
  }
  return {ok, "counts " + detail + "with exact per-minute rates"};
}

// ---------------------------------------------------------------------------
// 9. Streaming equivalence

bool partitions_match(const StreamConfig& cfg, const LinearModel& model, const TimeSeries& rec,
                      std::uint64_t seed) {
  const auto batch = batch_decisions(cfg, model, rec);
  Rng rng(seed, stream_id("partition"));
  StreamSession session(cfg, model);
  std::vector<Decision> got;
  std::size_t at = 0;
  // mixes single samples, odd sizes, and large chunks
  while (at < rec.sample_count()) {
    const std::size_t max_chunk = rng.uniform() < 0.3 ? 3 : 4000;
    const std::size_t next = std::min(rec.sample_count(), at + 1 + rng.below(max_chunk));
    std::vector<std::vector<double>> chunk;
    for (const auto& row : rec.data()) {
      chunk.emplace_back(row.begin() + static_cast<long>(at), row.begin() + static_cast<long>(next));
    }
    for (auto& d : session.push(chunk)) got.push_back(std::move(d));
    at = next;
  }
  return !batch.empty() && got == batch;
}

LinearModel one_feature_model(double threshold) {
  LinearModel m;
  m.kind = ModelKind::SvmBinary;
  m.classes = {0, 1};
  m.weights = {{1.0}};
  m.biases = {-threshold};
  m.means = {0.0};
  m.scales = {1.0};
  return m;
}

Outcome streaming_equivalence() {
  const auto pupil = gen_pupil(3.5, Envelope::step(20.0, 0.0, 1.0), 0.3, 0.05, 250.0, 60.0, 9);
  StreamConfig pcfg;
  pcfg.hop_s = 2.5;

  SynthSpec eeg;
  eeg.duration_s = 60.0;
  eeg.seed = 9;
  eeg.channels = {{"O1", "uV"}, {"O2", "uV"}};
  eeg.noise_sigma = 1.0;
  eeg.components.push_back({10.0, 2.0, {}, Envelope::window(25.0, 45.0), {}, {}});
  const auto alpha = gen_eeg(eeg);
  StreamConfig ecfg;
  ecfg.pipeline = StreamPipeline::IafCourse;
  ecfg.channels = alpha.channels();
  ecfg.window_s = 4.0;
  ecfg.hop_s = 2.0;

  std::size_t ok = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    ok += partitions_match(pcfg, one_feature_model(3.65), pupil, seed) &&
          partitions_match(ecfg, one_feature_model(1.0), alpha, seed + 100);
  }
  return {ok == 20, std::to_string(ok) + "/20 partitionings bit-identical to batch (pupil and alpha pipelines)"};
}

// ---------------------------------------------------------------------------
// 10. Adaptive loop

Outcome adaptive_loop() {
  // calibration recording, separate from the test seeds: low for 30 s, then high
  const auto calib = gen_pupil(3.5, Envelope::step(30.0, 0.0, 1.0), 0.3, 0.05, 250.0, 60.0, 5000);
  const auto feats = pupil_window_feature(calib, 5.0);
  FeatureDataset ds;
  ds.X.resize(static_cast<Eigen::Index>(feats.size()), 1);
  for (std::size_t i = 0; i < feats.size(); ++i) {
    ds.X(static_cast<Eigen::Index>(i), 0) = feats[i];
    ds.y.push_back(i >= 6 ? 1.0 : 0.0);
  }
  const auto model = train_linear_svm(ds);

  std::size_t on_time = 0;
  bool alternating = true;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto rec = gen_pupil(3.5, Envelope::step(20.0, 0.0, 1.0), 0.3, 0.05, 250.0, 60.0, seed);
    DifficultyController ctl;
    ctl.current = Difficulty::Difficult;
    ctl.task_period_s = 5.0;
    StreamSession session(StreamConfig{}, model, ctl);
    for (std::size_t at = 0; at < rec.sample_count(); at += 250) {
      std::vector<std::vector<double>> chunk{std::vector<double>(
          rec.data()[0].begin() + static_cast<long>(at),
          rec.data()[0].begin() + static_cast<long>(std::min(rec.sample_count(), at + 250)))};
      for (const auto& d : session.push(chunk)) adapt_difficulty(session, d);
    }
    const auto& cmds = session.commands();
    // the first window wholly after the switch is [20, 25)
    if (!cmds.empty() && cmds.front().new_difficulty == Difficulty::Easy &&
        cmds.front().at_time_s == 25.0 && session.decisions()[cmds.front().decision_index].start_s == 20.0) {
      ++on_time;
    }
    for (std::size_t i = 1; i < cmds.size(); ++i) {
      alternating = alternating && cmds[i].new_difficulty != cmds[i - 1].new_difficulty;
    }
  }
  return {on_time >= 95 && alternating,
          std::to_string(on_time) + "/100 seeds switch to easy at the 20-25 s window; commands " +
              (alternating ? "always alternate" : "REPEAT a direction")};
}

// ---------------------------------------------------------------------------
// 11. N-back engine

Outcome nback_engine() {
  Rng pick(11, stream_id("nback-acceptance"));
  std::size_t consistent = 0;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const int n = static_cast<int>(pick.below(5));
    const std::size_t len = static_cast<std::size_t>(n) + 5 + pick.below(40);
    const double rate = n == 0 ? 1.0 : 0.1 + 0.6 * pick.uniform();
    const auto s = gen_nback_schedule(n, len, rate, i);
    // independent rule check
    bool ok = s.stimuli.size() == len && s.is_match.size() == len;
    for (std::size_t k = 0; ok && k < len; ++k) {
      const bool want = n == 0 || (k >= static_cast<std::size_t>(n) &&
                                   s.stimuli[k] == s.stimuli[k - static_cast<std::size_t>(n)]);
      ok = s.is_match[k] == want && s.stimuli[k] >= 0 && s.stimuli[k] <= 9;
    }
    consistent += ok;
  }
  const auto example = nback_from_stimuli(2, {5, 8, 3, 4, 3, 9, 1});
  const auto twenty = gen_nback_schedule(2, 20, 0.3, 1);
  const bool ok = consistent == 1000 && example.match_count() == 1 && example.is_match[4] &&
                  twenty.span_s() == 70.0;
  return {ok, std::to_string(consistent) + "/1000 schedules rule-consistent; example has " +
                  std::to_string(example.match_count()) + " match; 20 stimuli span " +
                  fmt(twenty.span_s()) + " s"};
}

// ---------------------------------------------------------------------------
// 12. End-to-end CLI

int run_in(const fs::path& dir, const std::string& args, std::string* output = nullptr) {
  const auto log = dir.parent_path() / (dir.filename().string() + ".log");
  const std::string cmd =
      "cd '" + dir.string() + "' && '" COGLOAD_CLI "' " + args + " > '" + log.string() + "' 2>&1";
  const int raw = std::system(cmd.c_str());
  if (output) *output = read_text(log);
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

Outcome cli_end_to_end() {
  const auto root = fs::temp_directory_path() / ("cogload-acceptance-" + std::to_string(::getpid()));
  fs::remove_all(root);
  const auto dir = root / "run";
  fs::create_directories(dir);
  const bool empty = fs::is_empty(dir);
  Stopwatch clock;
  const std::vector<std::string> steps{
      "synth --kind pursuit-cohort --out cohort --persons 4 --cells circle-fast --difficulties 0,3 "
      "--sigmas 2,12 --repetitions 2 --seed 12",
      "pursuit-features --trials cohort/trials.csv --out dataset.csv",
      "train --dataset dataset.csv --binary --out model.json",
      "evaluate --dataset dataset.csv --binary --scheme lopo --out report.json"};
  std::string failed;
  for (const auto& s : steps) {
    if (run_in(dir, s) != 0) {
      failed = s.substr(0, s.find(' '));
      break;
    }
  }
  const double t = clock.seconds();
  std::size_t replays = 0;
  std::string last;
  if (failed.empty()) {
    const std::vector<std::string> manifests{"cohort/manifest.json", "dataset.csv.manifest.json",
                                             "model.json.manifest.json", "report.json.manifest.json"};
    for (const auto& m : manifests) replays += run_in(dir, "replay " + m, &last) == 0;
  }
  double accuracy = -1.0;
  if (failed.empty()) {
    accuracy = nlohmann::json::parse(read_text(dir / "report.json"))["pooled"]["accuracy"].get<double>();
  }
  fs::remove_all(root);
  return {empty && failed.empty() && t < 60.0 && replays == 4,
          failed.empty() ? "4 steps in " + fmt(t, 3) + " s, LOPO accuracy " + fmt(accuracy) + ", " +
                               std::to_string(replays) + "/4 manifests replay with matching digests"
                         : "step '" + failed + "' failed"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"IAF detection", iaf_detection},
      {"Spectral correctness", spectral_correctness},
      {"SSD gain", ssd_gain},
      {"Pursuit deviation oracle", deviation_oracle},
      {"Workload monotonicity", monotonicity},
      {"Classification protocol", classification_protocol},
      {"Regression recovery", regression_recovery},
      {"Blink counting", blink_counting},
      {"Streaming equivalence", streaming_equivalence},
      {"Adaptive loop", adaptive_loop},
      {"N-back engine", nback_engine},
      {"End-to-end CLI", cli_end_to_end},
  };
  const int only = argc > 1 ? std::atoi(argv[1]) : 0;
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only != 0 && static_cast<std::size_t>(only) != i + 1) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << (i + 1 < 10 ? " " : "") << i + 1 << " "
              << criteria[i].first << ": " << o.detail << std::endl;
  }
  return failures;
}
