#include "cogload/gaze.hpp"

#include "cogload/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <tuple>

namespace cogload {

std::string_view to_string(TrajectoryShape shape) noexcept {
  switch (shape) {
    case TrajectoryShape::Rectangle: return "rectangle";
    case TrajectoryShape::Circle: return "circle";
    case TrajectoryShape::Sine: return "sine";
  }
  return "?";
}

std::string_view to_string(SpeedClass speed) noexcept {
  return speed == SpeedClass::Slow ? "slow" : "fast";
}

TrajectoryShape parse_shape(std::string_view text) {
  if (text == "rectangle" || text == "rect") return TrajectoryShape::Rectangle;
  if (text == "circle") return TrajectoryShape::Circle;
  if (text == "sine") return TrajectoryShape::Sine;
  throw Error(Errc::InvalidArgument, "unknown trajectory shape '" + std::string(text) + "'");
}

SpeedClass parse_speed_class(std::string_view text) {
  if (text == "slow") return SpeedClass::Slow;
  if (text == "fast") return SpeedClass::Fast;
  throw Error(Errc::InvalidArgument, "unknown speed class '" + std::string(text) + "'");
}

double speed_px_s(SpeedClass speed) noexcept {
  return speed == SpeedClass::Slow ? defaults::kSlowSpeedPxS : defaults::kFastSpeedPxS;
}

std::string PursuitCondition::cell() const {
  return std::string(to_string(shape)) + "-" + std::string(to_string(speed));
}

std::string_view to_string(DeviationNormalization mode) noexcept {
  return mode == DeviationNormalization::PerTrial ? "per-trial" : "per-person";
}

DeviationNormalization parse_normalization(std::string_view text) {
  if (text == "per-trial") return DeviationNormalization::PerTrial;
  if (text == "per-person") return DeviationNormalization::PerPerson;
  throw Error(Errc::InvalidArgument, "unknown normalization '" + std::string(text) + "'");
}

namespace {

void require_fit(bool fits, const char* what) {
  if (!fits) throw Error(Errc::GeometryOverflow, std::string(what) + " does not fit the screen");
}

// Arc-length table of one left-to-right sine sweep.
class SineSweep {
 public:
  SineSweep(double x0, double width, double cy, double amplitude, double periods)
      : x0_(x0), width_(width), cy_(cy), amplitude_(amplitude), periods_(periods) {
    constexpr std::size_t kSteps = 1 << 15;
    u_.resize(kSteps + 1);
    s_.resize(kSteps + 1);
    Point2 prev = at(0.0);
    for (std::size_t i = 0; i <= kSteps; ++i) {
      const double u = static_cast<double>(i) / kSteps;
      const Point2 p = at(u);
      u_[i] = u;
      s_[i] = i == 0 ? 0.0 : s_[i - 1] + std::hypot(p.x - prev.x, p.y - prev.y);
      prev = p;
    }
  }

  double length() const noexcept { return s_.back(); }

  Point2 at_arc(double s) const {
    const auto it = std::lower_bound(s_.begin(), s_.end(), s);
    if (it == s_.begin()) return at(0.0);
    if (it == s_.end()) return at(1.0);
    const auto i = static_cast<std::size_t>(it - s_.begin());
    const double f = (s - s_[i - 1]) / (s_[i] - s_[i - 1]);
    return at(u_[i - 1] + f * (u_[i] - u_[i - 1]));
  }

 private:
  Point2 at(double u) const {
    return {x0_ + u * width_,
            cy_ + amplitude_ * std::sin(2.0 * std::numbers::pi * periods_ * u)};
  }

  double x0_, width_, cy_, amplitude_, periods_;
  std::vector<double> u_, s_;
};

}  // namespace

TrajectoryPath gen_trajectory(TrajectoryShape shape, double speed, double duration_s,
                              double rate_hz, Screen screen, const TrajectoryGeometry& geometry) {
  if (!(speed > 0.0) || !(rate_hz > 0.0) || duration_s < 0.0) {
    throw Error(Errc::InvalidArgument, "trajectory needs positive speed and rate");
  }
  TrajectoryPath path;
  path.shape = shape;
  path.speed_px_s = speed;
  path.rate_hz = rate_hz;
  path.screen = screen;
  const double cx = screen.width_px / 2.0;
  const double cy = screen.height_px / 2.0;
  const auto n = static_cast<std::size_t>(std::llround(duration_s * rate_hz));
  path.points.reserve(n);

  switch (shape) {
    case TrajectoryShape::Circle: {
      const double r = geometry.circle_radius_px;
      require_fit(r > 0.0 && 2.0 * r <= screen.width_px && 2.0 * r <= screen.height_px,
                  "circle");
      path.cycle_length_px = 2.0 * std::numbers::pi * r;
      for (std::size_t k = 0; k < n; ++k) {
        const double theta = speed * path.time_at(k) / r;
        path.points.push_back({cx + r * std::cos(theta), cy + r * std::sin(theta)});
      }
      break;
    }
    case TrajectoryShape::Rectangle: {
      const double w = geometry.rect_width_px;
      const double h = geometry.rect_height_px;
      require_fit(w > 0.0 && h > 0.0 && w <= screen.width_px && h <= screen.height_px,
                  "rectangle");
      path.cycle_length_px = 2.0 * (w + h);
      const double left = cx - w / 2.0;
      const double top = cy - h / 2.0;
      for (std::size_t k = 0; k < n; ++k) {
        double s = std::fmod(speed * path.time_at(k), path.cycle_length_px);
        Point2 p;
        if (s < w) {
          p = {left + s, top};
        } else if ((s -= w) < h) {
          p = {left + w, top + s};
        } else if ((s -= h) < w) {
          p = {left + w - s, top + h};
        } else {
          s -= w;
          p = {left, top + h - s};
        }
        path.points.push_back(p);
      }
      break;
    }
    case TrajectoryShape::Sine: {
      const double amplitude = geometry.sine_amplitude_frac * screen.height_px;
      const double x0 = geometry.sine_margin_frac * screen.width_px;
      const double width = screen.width_px - 2.0 * x0;
      require_fit(width > 0.0 && amplitude >= 0.0 && 2.0 * amplitude <= screen.height_px,
                  "sine");
      const SineSweep sweep(x0, width, cy, amplitude, geometry.sine_periods_per_sweep);
      const double len = sweep.length();
      path.cycle_length_px = 2.0 * len;
      for (std::size_t k = 0; k < n; ++k) {
        const double s = std::fmod(speed * path.time_at(k), path.cycle_length_px);
        path.points.push_back(s <= len ? sweep.at_arc(s) : sweep.at_arc(2.0 * len - s));
      }
      break;
    }
  }
  return path;
}

Point2 position_at(const TrajectoryPath& path, double time_s) {
  if (path.points.empty()) throw Error(Errc::InvalidArgument, "empty trajectory");
  const double pos = time_s * path.rate_hz;
  if (pos <= 0.0) return path.points.front();
  const auto last = static_cast<double>(path.points.size() - 1);
  if (pos >= last) return path.points.back();
  const auto i = static_cast<std::size_t>(pos);
  const double f = pos - static_cast<double>(i);
  const Point2& a = path.points[i];
  const Point2& b = path.points[i + 1];
  return {a.x + f * (b.x - a.x), a.y + f * (b.y - a.y)};
}

std::vector<double> pursuit_deviation(std::span<const Point2> path, std::span<const Point2> gaze) {
  if (path.size() != gaze.size()) {
    throw Error(Errc::LengthMismatch, "path has " + std::to_string(path.size()) +
                                          " samples, gaze has " + std::to_string(gaze.size()));
  }
  std::vector<double> d(path.size());
  for (std::size_t t = 0; t < path.size(); ++t) {
    const double dx = path[t].x - gaze[t].x;
    const double dy = path[t].y - gaze[t].y;
    d[t] = std::sqrt(dx * dx + dy * dy);
  }
  return d;
}

std::vector<double> pursuit_deviation(const TrajectoryPath& path, const GazeTrace& gaze) {
  if (path.rate_hz != gaze.rate_hz) {
    throw Error(Errc::LengthMismatch, "path and gaze sampling rates differ");
  }
  return pursuit_deviation(path.points, gaze.points);
}

std::vector<double> normalize_deviation(std::span<const double> devs) {
  if (devs.empty()) throw Error(Errc::InvalidArgument, "cannot normalize an empty series");
  return normalize_deviation(devs, *std::max_element(devs.begin(), devs.end()));
}

std::vector<double> normalize_deviation(std::span<const double> devs, double reference_max) {
  if (devs.empty()) throw Error(Errc::InvalidArgument, "cannot normalize an empty series");
  std::vector<double> out(devs.size(), 0.0);
  if (reference_max <= 0.0) return out;
  for (std::size_t i = 0; i < devs.size(); ++i) out[i] = devs[i] / reference_max;
  return out;
}

std::vector<double> smooth_running_mean(std::span<const double> devs, std::size_t window,
                                        std::size_t hop) {
  if (window == 0 || hop == 0) {
    throw Error(Errc::ZeroLengthWindow, "running mean needs window and hop >= 1");
  }
  if (devs.size() < window) {
    throw Error(Errc::TooShort, "series of " + std::to_string(devs.size()) +
                                    " samples is shorter than the smoothing window (" +
                                    std::to_string(window) + ")");
  }
  const std::size_t count = (devs.size() - window) / hop + 1;
  std::vector<double> out(count);
  const double inv = 1.0 / static_cast<double>(window);
  if (hop >= window) {
    for (std::size_t i = 0; i < count; ++i) {
      double sum = 0.0;
      for (std::size_t k = 0; k < window; ++k) sum += devs[i * hop + k];
      out[i] = sum * inv;
    }
    return out;
  }
  // Sliding sum, re-summed from scratch every `window` outputs to bound drift.
  double sum = 0.0;
  for (std::size_t k = 0; k < window; ++k) sum += devs[k];
  out[0] = sum * inv;
  for (std::size_t i = 1; i < count; ++i) {
    const std::size_t start = i * hop;
    if (i % window == 0) {
      sum = 0.0;
      for (std::size_t k = 0; k < window; ++k) sum += devs[start + k];
    } else {
      for (std::size_t k = 0; k < hop; ++k) {
        sum += devs[start + window - hop + k] - devs[start - hop + k];
      }
    }
    out[i] = sum * inv;
  }
  return out;
}

namespace {

std::size_t head_samples(double drop_head_s, double rate_hz) {
  if (drop_head_s < 0.0) throw Error(Errc::InvalidArgument, "head drop must be non-negative");
  return static_cast<std::size_t>(std::llround(drop_head_s * rate_hz));
}

std::vector<double> trimmed_deviation(const TrajectoryPath& path, const GazeTrace& gaze,
                                      double drop_head_s) {
  auto devs = pursuit_deviation(path, gaze);
  const std::size_t head = head_samples(drop_head_s, path.rate_hz);
  if (devs.size() <= head) {
    throw Error(Errc::EmptyAfterTrim, "trial of " + std::to_string(devs.size()) +
                                          " samples is empty after dropping " +
                                          std::to_string(drop_head_s) + " s");
  }
  devs.erase(devs.begin(), devs.begin() + static_cast<std::ptrdiff_t>(head));
  return devs;
}

}  // namespace

double trial_max_deviation(const TrajectoryPath& path, const GazeTrace& gaze,
                           double drop_head_s) {
  const auto devs = trimmed_deviation(path, gaze, drop_head_s);
  return *std::max_element(devs.begin(), devs.end());
}

PursuitInstance build_pursuit_instance(const TrajectoryPath& path, const GazeTrace& gaze,
                                       int label, std::string person_id,
                                       PursuitCondition condition, int repetition_id,
                                       const InstanceOptions& options) {
  if (options.target_len == 0) throw Error(Errc::InvalidArgument, "target length must be >= 1");
  const auto devs = trimmed_deviation(path, gaze, options.drop_head_s);
  const auto normalized = options.reference_max ? normalize_deviation(devs, *options.reference_max)
                                                : normalize_deviation(devs);
  if (normalized.size() < options.smooth_window) {
    throw Error(Errc::EmptyAfterTrim, "trial is shorter than the smoothing window after trimming");
  }
  auto smoothed = smooth_running_mean(normalized, options.smooth_window, options.smooth_hop);

  PursuitInstance instance;
  instance.label = label;
  instance.person_id = std::move(person_id);
  instance.condition = condition;
  instance.repetition_id = repetition_id;
  if (smoothed.size() > options.target_len) {
    instance.adjustment = LengthAdjustment::Truncated;
    instance.adjusted_samples = smoothed.size() - options.target_len;
    smoothed.resize(options.target_len);
  } else if (smoothed.size() < options.target_len) {
    instance.adjustment = LengthAdjustment::Padded;
    instance.adjusted_samples = options.target_len - smoothed.size();
    smoothed.resize(options.target_len, smoothed.back());
  }
  instance.values = std::move(smoothed);
  return instance;
}

std::vector<PursuitInstance> build_pursuit_dataset(std::span<const PursuitTrial> trials,
                                                   const InstanceOptions& options,
                                                   DeviationNormalization normalization) {
  std::map<std::string, double> person_max;
  if (normalization == DeviationNormalization::PerPerson) {
    for (const auto& trial : trials) {
      const double m = trial_max_deviation(trial.path, trial.gaze, options.drop_head_s);
      auto [it, inserted] = person_max.emplace(trial.person_id, m);
      if (!inserted) it->second = std::max(it->second, m);
    }
  }

  std::vector<std::size_t> order(trials.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  const auto key = [&](std::size_t i) {
    const auto& t = trials[i];
    return std::make_tuple(t.person_id, static_cast<int>(t.condition.shape),
                           static_cast<int>(t.condition.speed), t.condition.difficulty,
                           t.repetition_id);
  };
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return key(a) < key(b); });

  std::vector<PursuitInstance> out;
  out.reserve(trials.size());
  for (auto i : order) {
    const auto& t = trials[i];
    InstanceOptions opts = options;
    if (normalization == DeviationNormalization::PerPerson) {
      opts.reference_max = person_max.at(t.person_id);
    }
    out.push_back(build_pursuit_instance(t.path, t.gaze, t.condition.difficulty, t.person_id,
                                         t.condition, t.repetition_id, opts));
  }
  return out;
}

std::vector<double> pupil_window_feature(const TimeSeries& diameter, double window_s) {
  return pupil_window_feature(diameter, std::vector<bool>(diameter.sample_count(), true),
                              window_s);
}

std::vector<double> pupil_window_feature(const TimeSeries& diameter,
                                         const std::vector<bool>& valid, double window_s) {
  if (diameter.channel_count() != 1) {
    throw Error(Errc::InvalidArgument, "pupil features expect a single diameter channel");
  }
  if (valid.size() != diameter.sample_count()) {
    throw Error(Errc::LengthMismatch, "validity mask length differs from the series");
  }
  const auto plan = make_window_plan(diameter, window_s, window_s);
  if (plan.frame_count == 0) {
    throw Error(Errc::TooShort, "recording is shorter than one " + std::to_string(window_s) +
                                    " s window");
  }
  const auto row = diameter.row(0);
  std::vector<double> means(plan.frame_count);
  for (std::size_t w = 0; w < plan.frame_count; ++w) {
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t k = plan.frame_start(w); k < plan.frame_end(w); ++k) {
      if (valid[k] && std::isfinite(row[k])) {
        sum += row[k];
        ++count;
      }
    }
    if (count == 0) {
      throw Error(Errc::NoValidSamples, "window " + std::to_string(w) + " has no valid samples");
    }
    means[w] = sum / static_cast<double>(count);
  }
  return means;
}

}  // namespace cogload
