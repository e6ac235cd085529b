#pragma once

#include "cogload/defaults.hpp"
#include "cogload/timeseries.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cogload {

enum class TrajectoryShape { Rectangle, Circle, Sine };
enum class SpeedClass { Slow, Fast };

std::string_view to_string(TrajectoryShape shape) noexcept;
std::string_view to_string(SpeedClass speed) noexcept;
TrajectoryShape parse_shape(std::string_view text);
SpeedClass parse_speed_class(std::string_view text);
double speed_px_s(SpeedClass speed) noexcept;

struct Point2 {
  double x{0.0};
  double y{0.0};
  bool operator==(const Point2&) const = default;
};

struct Screen {
  double width_px{1920.0};
  double height_px{1080.0};
};

// Stimulus dimensions. The sine path sweeps left to right across the central
// (1 - 2 * margin) of the screen and retraces back, so one cycle is two sweeps.
struct TrajectoryGeometry {
  double rect_width_px{800.0};
  double rect_height_px{400.0};
  double circle_radius_px{200.0};
  double sine_amplitude_frac{0.25};  // of screen height
  double sine_periods_per_sweep{2.0};
  double sine_margin_frac{0.1};  // of screen width, each side
};

// Stimulus positions sampled at rate_hz, moving at constant speed along the
// shape. Sample k is at t = k / rate_hz.
struct TrajectoryPath {
  TrajectoryShape shape{TrajectoryShape::Circle};
  double speed_px_s{0.0};
  double rate_hz{0.0};
  Screen screen;
  double dot_diameter_px{defaults::kDotDiameterPx};
  double cycle_length_px{0.0};
  std::vector<Point2> points;

  std::size_t size() const noexcept { return points.size(); }
  double time_at(std::size_t k) const noexcept { return static_cast<double>(k) / rate_hz; }
  double cycle_period_s() const noexcept { return cycle_length_px / speed_px_s; }
};

struct GazeTrace {
  double rate_hz{0.0};
  std::vector<Point2> points;
  std::vector<bool> valid;

  std::size_t size() const noexcept { return points.size(); }
};

struct PursuitCondition {
  TrajectoryShape shape{TrajectoryShape::Circle};
  SpeedClass speed{SpeedClass::Slow};
  int difficulty{0};  // 0 = no task, n = n-back

  // "circle-fast": the trajectory/speed cell, without difficulty.
  std::string cell() const;
  bool operator==(const PursuitCondition&) const = default;
};

enum class LengthAdjustment { None, Truncated, Padded };

struct PursuitInstance {
  std::vector<double> values;
  int label{0};
  std::string person_id;
  PursuitCondition condition;
  int repetition_id{0};
  LengthAdjustment adjustment{LengthAdjustment::None};
  std::size_t adjusted_samples{0};  // samples removed or added to reach the target length
};

TrajectoryPath gen_trajectory(TrajectoryShape shape, double speed_px_s, double duration_s,
                              double rate_hz, Screen screen = {},
                              const TrajectoryGeometry& geometry = {});

// Position at arbitrary time on the path's constant-speed parameterization,
// linearly interpolated between samples; clamps outside the sampled span.
Point2 position_at(const TrajectoryPath& path, double time_s);

// Per-sample Euclidean distance between stimulus and gaze.
std::vector<double> pursuit_deviation(std::span<const Point2> path, std::span<const Point2> gaze);
std::vector<double> pursuit_deviation(const TrajectoryPath& path, const GazeTrace& gaze);

// Divides by the series maximum (or by an externally supplied reference
// maximum). An all-zero series stays all zero.
std::vector<double> normalize_deviation(std::span<const double> devs);
std::vector<double> normalize_deviation(std::span<const double> devs, double reference_max);

// output[i] = mean(devs[i*hop, i*hop + window)).
std::vector<double> smooth_running_mean(std::span<const double> devs,
                                        std::size_t window = defaults::kPursuitSmoothWindow,
                                        std::size_t hop = defaults::kPursuitSmoothHop);

struct InstanceOptions {
  double drop_head_s{defaults::kPursuitDropHeadS};
  std::size_t target_len{defaults::kPursuitInstanceLength};
  std::size_t smooth_window{defaults::kPursuitSmoothWindow};
  std::size_t smooth_hop{defaults::kPursuitSmoothHop};
  // When set, deviations are divided by this value instead of the trial's own
  // maximum.
  std::optional<double> reference_max;
};

// Largest deviation after dropping the head of the trial.
double trial_max_deviation(const TrajectoryPath& path, const GazeTrace& gaze,
                           double drop_head_s = defaults::kPursuitDropHeadS);

// drop head -> deviation -> normalize -> running mean -> fix length.
PursuitInstance build_pursuit_instance(const TrajectoryPath& path, const GazeTrace& gaze,
                                       int label, std::string person_id,
                                       PursuitCondition condition, int repetition_id,
                                       const InstanceOptions& options = {});

enum class DeviationNormalization { PerTrial, PerPerson };

std::string_view to_string(DeviationNormalization mode) noexcept;
DeviationNormalization parse_normalization(std::string_view text);

struct PursuitTrial {
  TrajectoryPath path;
  GazeTrace gaze;
  std::string person_id;
  PursuitCondition condition;
  int repetition_id{0};
};

// Instances for a set of trials, ordered by (person, cell, difficulty,
// repetition). PerPerson divides every trial of a person by the largest
// deviation over all of that person's trials; PerTrial by the trial's own max.
// Labels are the trial difficulties.
std::vector<PursuitInstance> build_pursuit_dataset(
    std::span<const PursuitTrial> trials, const InstanceOptions& options = {},
    DeviationNormalization normalization = DeviationNormalization::PerPerson);

// Mean pupil diameter over consecutive non-overlapping windows. Samples that
// are marked invalid (or are non-finite) are excluded.
std::vector<double> pupil_window_feature(const TimeSeries& diameter,
                                         double window_s = defaults::kPupilWindowS);
std::vector<double> pupil_window_feature(const TimeSeries& diameter,
                                         const std::vector<bool>& valid,
                                         double window_s = defaults::kPupilWindowS);

}  // namespace cogload
