#include "cogload/eeg.hpp"

#include "cogload/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cogload {

double PowerCourse::mean() const {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

std::string_view to_string(ElectrodeReduction mode) noexcept {
  return mode == ElectrodeReduction::PerChannel ? "per-channel" : "signal-mean";
}

ElectrodeReduction parse_reduction(std::string_view text) {
  if (text == "per-channel") return ElectrodeReduction::PerChannel;
  if (text == "signal-mean") return ElectrodeReduction::SignalMean;
  throw Error(Errc::InvalidArgument, "unknown reduction '" + std::string(text) + "'");
}

namespace {

struct FrameSeries {
  std::vector<double> power;
  std::vector<double> times;
};

// bandpass -> optional trim -> stft -> band power for one channel.
FrameSeries channel_band_power(const TimeSeries& one, const BandSpec& band,
                               const CourseOptions& opt) {
  TimeSeries filtered =
      bandpass(one, opt.prefilter_low_hz, opt.prefilter_high_hz, opt.filter_order);
  if (opt.trim_edge_s) filtered = trim_edges(filtered, *opt.trim_edge_s);
  const auto plan = make_window_plan(filtered, opt.window_s, opt.hop_s);
  const auto spec = stft_power(filtered, plan);
  FrameSeries out;
  out.power = band_power(spec, band);
  out.times.reserve(out.power.size());
  for (std::size_t f = 0; f < out.power.size(); ++f) out.times.push_back(spec.frame_time(f));
  return out;
}

std::vector<std::string> sorted_unique(std::span<const std::string> electrodes) {
  if (electrodes.empty()) throw Error(Errc::InvalidArgument, "no electrodes requested");
  std::vector<std::string> labels(electrodes.begin(), electrodes.end());
  std::sort(labels.begin(), labels.end());
  if (std::adjacent_find(labels.begin(), labels.end()) != labels.end()) {
    throw Error(Errc::InvalidArgument, "electrode listed twice");
  }
  return labels;
}

PowerCourse course_over(const TimeSeries& series, const BandSpec& band,
                        std::span<const std::string> electrodes, const CourseOptions& opt) {
  const auto labels = sorted_unique(electrodes);
  const TimeSeries selected = select_channels(series, labels);

  PowerCourse course;
  course.band = band;
  if (opt.reduction == ElectrodeReduction::SignalMean) {
    auto fs = channel_band_power(channel_mean(selected), band, opt);
    course.values = std::move(fs.power);
    course.frame_times_s = std::move(fs.times);
    return course;
  }
  for (std::size_t c = 0; c < selected.channel_count(); ++c) {
    auto fs = channel_band_power(select_channels(selected, {labels[c]}), band, opt);
    if (c == 0) {
      course.values = std::move(fs.power);
      course.frame_times_s = std::move(fs.times);
    } else {
      for (std::size_t f = 0; f < course.values.size(); ++f) course.values[f] += fs.power[f];
    }
  }
  const double n = static_cast<double>(selected.channel_count());
  for (auto& v : course.values) v /= n;
  return course;
}

bool all_zero(const TimeSeries& series) {
  for (const auto& row : series.data()) {
    for (double v : row) {
      if (v != 0.0) return false;
    }
  }
  return true;
}

}  // namespace

PowerCourse iaf_course(const TimeSeries& series, const BandSpec& iaf,
                       std::span<const std::string> electrodes, const CourseOptions& options) {
  return course_over(series, iaf, electrodes, options);
}

PowerCourse theta_course(const TimeSeries& series, std::span<const std::string> electrodes,
                         const CourseOptions& options) {
  const BandSpec band = theta_band();
  const auto labels = sorted_unique(electrodes);
  if (labels.size() < 2) return course_over(series, band, labels, options);

  const TimeSeries selected = select_channels(series, labels);
  // No SSD basis exists for a silent recording; its course is zero anyway.
  if (all_zero(selected)) {
    CourseOptions single = options;
    single.reduction = ElectrodeReduction::SignalMean;
    return course_over(selected, band, labels, single);
  }
  const auto result = ssd(selected, band);
  const TimeSeries component = ssd_components(selected, result, 1);
  CourseOptions single = options;
  single.reduction = ElectrodeReduction::PerChannel;
  const std::vector<std::string> name{component.channel(0).label};
  return course_over(component, band, name, single);
}

PowerCourse normalize_course(const PowerCourse& course, const PowerCourse& baseline) {
  if (!(course.band == baseline.band)) {
    throw Error(Errc::InvalidArgument, "course and baseline cover different bands");
  }
  if (baseline.values.empty()) throw Error(Errc::ZeroBaseline, "baseline course is empty");
  const double ref = baseline.mean();
  if (!(ref > 0.0)) {
    throw Error(Errc::ZeroBaseline, "baseline mean power is " + std::to_string(ref));
  }
  PowerCourse out = course;
  for (auto& v : out.values) v /= ref;
  out.normalized = true;
  return out;
}

RatioCourse theta_alpha_ratio(const PowerCourse& theta, const PowerCourse& alpha) {
  if (theta.values.size() != alpha.values.size()) {
    throw Error(Errc::LengthMismatch, "theta has " + std::to_string(theta.values.size()) +
                                          " frames, alpha " +
                                          std::to_string(alpha.values.size()));
  }
  for (std::size_t f = 0; f < theta.frame_times_s.size() && f < alpha.frame_times_s.size(); ++f) {
    if (std::abs(theta.frame_times_s[f] - alpha.frame_times_s[f]) > 1e-9) {
      throw Error(Errc::LengthMismatch, "frame " + std::to_string(f) + " times differ");
    }
  }
  RatioCourse out;
  out.frame_times_s = theta.frame_times_s;
  out.values.resize(theta.values.size());
  for (std::size_t f = 0; f < theta.values.size(); ++f) {
    if (alpha.values[f] == 0.0) {
      throw Error(Errc::ZeroAlphaFrame, "alpha power is zero in frame " + std::to_string(f));
    }
    out.values[f] = theta.values[f] / alpha.values[f];
  }
  return out;
}

BlinkReport count_blinks(const TimeSeries& series, double threshold_uv, double refractory_s) {
  const auto fp1 = series.index_of("Fp1");
  const auto fp2 = series.index_of("Fp2");
  if (!fp1 || !fp2) {
    throw Error(Errc::MissingChannel, std::string("blink detection needs Fp1 and Fp2; missing ") +
                                          (!fp1 ? "Fp1" : "Fp2"));
  }
  if (refractory_s < 0.0) throw Error(Errc::InvalidArgument, "refractory must be non-negative");
  const auto a = series.row(*fp1);
  const auto b = series.row(*fp2);

  BlinkReport report;
  report.duration_s = series.duration_s();
  bool above = false;
  bool have_last = false;
  double last = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double level = 0.5 * (std::abs(a[k]) + std::abs(b[k]));
    const bool now_above = level >= threshold_uv;
    if (now_above && !above) {
      const double t = series.time_at(k);
      if (!have_last || t - last >= refractory_s) {
        report.blink_times_s.push_back(t);
        last = t;
        have_last = true;
      }
    }
    above = now_above;
  }
  report.count = report.blink_times_s.size();
  report.per_minute =
      report.duration_s > 0.0 ? static_cast<double>(report.count) / (report.duration_s / 60.0) : 0.0;
  return report;
}

std::vector<std::string> occipital_electrodes() {
  return {defaults::kOccipitalElectrodes.begin(), defaults::kOccipitalElectrodes.end()};
}

std::vector<std::string> frontal_electrodes() {
  return {defaults::kFrontalElectrodes.begin(), defaults::kFrontalElectrodes.end()};
}

}  // namespace cogload
