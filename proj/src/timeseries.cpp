#include "cogload/timeseries.hpp"

#include "cogload/error.hpp"

#include <algorithm>
#include <cmath>

namespace cogload {

namespace {

bool within_span(double t, double t0, double duration) {
  // Slack absorbs decimal round-off from annotation files.
  return t >= t0 - 1e-9 && t <= t0 + duration + 1e-9;
}

}  // namespace

TimeSeries::TimeSeries(double rate_hz, std::vector<Channel> channels,
                       std::vector<std::vector<double>> data, double t0_s,
                       std::vector<Annotation> annotations)
    : rate_hz_(rate_hz),
      channels_(std::move(channels)),
      data_(std::move(data)),
      t0_s_(t0_s),
      annotations_(std::move(annotations)) {
  if (!(rate_hz_ > 0.0) || !std::isfinite(rate_hz_)) {
    throw Error(Errc::InvalidArgument, "sampling rate must be positive");
  }
  if (channels_.size() != data_.size()) {
    throw Error(Errc::InvalidArgument, "channel label count does not match data rows");
  }
  for (const auto& row : data_) {
    if (row.size() != data_.front().size()) {
      throw Error(Errc::InvalidArgument, "channel rows differ in length");
    }
  }
  std::stable_sort(annotations_.begin(), annotations_.end(),
                   [](const Annotation& a, const Annotation& b) { return a.time_s < b.time_s; });
  for (const auto& a : annotations_) {
    if (!within_span(a.time_s, t0_s_, duration_s())) {
      throw Error(Errc::InvalidArgument,
                  "annotation '" + a.tag + "' lies outside the recording span");
    }
  }
}

std::vector<std::string> TimeSeries::labels() const {
  std::vector<std::string> out;
  out.reserve(channels_.size());
  for (const auto& ch : channels_) out.push_back(ch.label);
  return out;
}

std::optional<std::size_t> TimeSeries::index_of(std::string_view label) const {
  for (std::size_t c = 0; c < channels_.size(); ++c) {
    if (channels_[c].label == label) return c;
  }
  return std::nullopt;
}

long long TimeSeries::nearest_sample(double time_s) const noexcept {
  return std::llround((time_s - t0_s_) * rate_hz_);
}

TimeSeries make_series(double rate_hz, std::string label, std::vector<double> values,
                       std::string unit, double t0_s) {
  return TimeSeries(rate_hz, {Channel{std::move(label), std::move(unit)}}, {std::move(values)},
                    t0_s);
}

WindowPlan make_window_plan(double rate_hz, std::size_t samples, double window_s, double hop_s) {
  if (!(window_s > 0.0) || !(hop_s > 0.0)) {
    throw Error(Errc::InvalidArgument, "window and hop must be positive");
  }
  const auto window_len = std::llround(window_s * rate_hz);
  const auto hop_len = std::llround(hop_s * rate_hz);
  if (window_len < 1) {
    throw Error(Errc::ZeroLengthWindow, "window rounds to zero samples");
  }
  if (hop_len < 1) {
    throw Error(Errc::ZeroLengthWindow, "hop rounds to zero samples");
  }
  WindowPlan plan;
  plan.window_s = window_s;
  plan.hop_s = hop_s;
  plan.window_len = static_cast<std::size_t>(window_len);
  plan.hop_len = static_cast<std::size_t>(hop_len);
  plan.frame_count =
      samples >= plan.window_len ? (samples - plan.window_len) / plan.hop_len + 1 : 0;
  return plan;
}

WindowPlan make_window_plan(const TimeSeries& series, double window_s, double hop_s) {
  return make_window_plan(series.rate_hz(), series.sample_count(), window_s, hop_s);
}

TimeSeries slice_samples(const TimeSeries& series, std::size_t begin, std::size_t end) {
  if (begin > end || end > series.sample_count()) {
    throw Error(Errc::InvalidArgument, "slice exceeds series bounds");
  }
  std::vector<std::vector<double>> rows;
  rows.reserve(series.channel_count());
  for (const auto& row : series.data()) {
    rows.emplace_back(row.begin() + static_cast<std::ptrdiff_t>(begin),
                      row.begin() + static_cast<std::ptrdiff_t>(end));
  }
  const double t0 = series.time_at(begin);
  const double duration = static_cast<double>(end - begin) / series.rate_hz();
  std::vector<Annotation> kept;
  for (const auto& a : series.annotations()) {
    if (within_span(a.time_s, t0, duration)) kept.push_back(a);
  }
  return TimeSeries(series.rate_hz(), series.channels(), std::move(rows), t0, std::move(kept));
}

TimeSeries trim_edges(const TimeSeries& series, double edge_s) {
  if (edge_s < 0.0) throw Error(Errc::InvalidArgument, "edge must be non-negative");
  if (edge_s == 0.0) return series;
  const auto edge = static_cast<std::size_t>(std::llround(edge_s * series.rate_hz()));
  const std::size_t n = series.sample_count();
  if (n <= 2 * edge) {
    throw Error(Errc::TooShort, "series of " + std::to_string(series.duration_s()) +
                                    " s cannot lose " + std::to_string(edge_s) + " s per edge");
  }
  return slice_samples(series, edge, n - edge);
}

TimeSeries channel_mean(const TimeSeries& series) {
  if (series.channel_count() == 0) {
    throw Error(Errc::InvalidArgument, "channel_mean needs at least one channel");
  }
  const std::size_t n = series.sample_count();
  const double count = static_cast<double>(series.channel_count());
  std::vector<double> mean(n, 0.0);
  for (const auto& row : series.data()) {
    for (std::size_t k = 0; k < n; ++k) mean[k] += row[k];
  }
  for (auto& v : mean) v /= count;

  std::string unit = series.channel(0).unit;
  for (const auto& ch : series.channels()) {
    if (ch.unit != unit) unit.clear();
  }
  return TimeSeries(series.rate_hz(), {Channel{"mean", unit}}, {std::move(mean)},
                    series.t0_s(), series.annotations());
}

TimeSeries select_channels(const TimeSeries& series, std::span<const std::string> labels) {
  std::vector<Channel> channels;
  std::vector<std::vector<double>> rows;
  for (const auto& label : labels) {
    const auto matches = std::count_if(series.channels().begin(), series.channels().end(),
                                       [&](const Channel& c) { return c.label == label; });
    if (matches == 0) throw Error(Errc::UnknownChannel, "channel '" + label + "' not found");
    if (matches > 1) {
      throw Error(Errc::UnknownChannel, "channel '" + label + "' is ambiguous");
    }
    const auto c = *series.index_of(label);
    channels.push_back(series.channel(c));
    rows.push_back(series.data()[c]);
  }
  return TimeSeries(series.rate_hz(), std::move(channels), std::move(rows), series.t0_s(),
                    series.annotations());
}

TimeSeries select_channels(const TimeSeries& series,
                           std::initializer_list<std::string_view> labels) {
  std::vector<std::string> owned(labels.begin(), labels.end());
  return select_channels(series, std::span<const std::string>(owned));
}

}  // namespace cogload
