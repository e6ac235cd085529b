#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cogload {

struct Channel {
  std::string label;
  std::string unit;  // "uV", "mm", "px", ... carried as metadata only

  bool operator==(const Channel&) const = default;
};

struct Annotation {
  double time_s{0.0};
  std::string tag;

  bool operator==(const Annotation&) const = default;
};

// Multichannel, uniformly sampled signal. Sample k of every channel occurs at
// t0_s + k / rate_hz. Instances are immutable once constructed; the
// constructor enforces the layout invariants and sorts annotations by time.
class TimeSeries {
 public:
  TimeSeries() = default;
  TimeSeries(double rate_hz, std::vector<Channel> channels,
             std::vector<std::vector<double>> data, double t0_s = 0.0,
             std::vector<Annotation> annotations = {});

  double rate_hz() const noexcept { return rate_hz_; }
  double t0_s() const noexcept { return t0_s_; }
  std::size_t channel_count() const noexcept { return channels_.size(); }
  std::size_t sample_count() const noexcept { return data_.empty() ? 0 : data_.front().size(); }
  double duration_s() const noexcept { return static_cast<double>(sample_count()) / rate_hz_; }

  const std::vector<Channel>& channels() const noexcept { return channels_; }
  const Channel& channel(std::size_t c) const { return channels_.at(c); }
  std::vector<std::string> labels() const;
  std::optional<std::size_t> index_of(std::string_view label) const;

  const std::vector<std::vector<double>>& data() const noexcept { return data_; }
  std::span<const double> row(std::size_t c) const { return data_.at(c); }
  const std::vector<Annotation>& annotations() const noexcept { return annotations_; }

  double time_at(std::size_t k) const noexcept {
    return t0_s_ + static_cast<double>(k) / rate_hz_;
  }
  // Nearest sample to an absolute time (may fall outside [0, samples)).
  long long nearest_sample(double time_s) const noexcept;

  bool operator==(const TimeSeries&) const = default;

 private:
  double rate_hz_{1.0};
  std::vector<Channel> channels_;
  std::vector<std::vector<double>> data_;
  double t0_s_{0.0};
  std::vector<Annotation> annotations_;
};

// Convenience for single-channel construction.
TimeSeries make_series(double rate_hz, std::string label, std::vector<double> values,
                       std::string unit = "", double t0_s = 0.0);

// Framing of a series into fixed-length windows. Frame i covers samples
// [i * hop_len, i * hop_len + window_len).
struct WindowPlan {
  double window_s{0.0};
  double hop_s{0.0};
  std::size_t window_len{0};
  std::size_t hop_len{0};
  std::size_t frame_count{0};

  std::size_t frame_start(std::size_t frame) const noexcept { return frame * hop_len; }
  std::size_t frame_end(std::size_t frame) const noexcept {
    return frame * hop_len + window_len;
  }

  bool operator==(const WindowPlan&) const = default;
};

WindowPlan make_window_plan(double rate_hz, std::size_t samples, double window_s, double hop_s);
WindowPlan make_window_plan(const TimeSeries& series, double window_s, double hop_s);

// Drops edge_s seconds from both ends. Annotations outside the kept range are
// dropped; kept ones keep their absolute time.
TimeSeries trim_edges(const TimeSeries& series, double edge_s);

// Single-channel series holding the per-sample mean across channels.
TimeSeries channel_mean(const TimeSeries& series);

// Channels in the requested order. Each label must occur exactly once.
TimeSeries select_channels(const TimeSeries& series, std::span<const std::string> labels);
TimeSeries select_channels(const TimeSeries& series, std::initializer_list<std::string_view> labels);

// Samples [begin, end) of every channel; t0 shifts accordingly and
// annotations outside the slice are dropped.
TimeSeries slice_samples(const TimeSeries& series, std::size_t begin, std::size_t end);

}  // namespace cogload
