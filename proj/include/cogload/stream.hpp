#pragma once

#include "cogload/defaults.hpp"
#include "cogload/learn.hpp"
#include "cogload/spectral.hpp"
#include "cogload/timeseries.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cogload {

// Per-window feature chains shared by streaming and batch evaluation.
//   PupilWindow:      mean of the finite samples of the first channel.
//   IafCourse:        band power in `band`, averaged over frames and channels,
//                     after the usual 0.5-20 Hz prefilter inside the window.
//   PursuitDeviation: mean stimulus/gaze distance; channels are
//                     path_x, path_y, gaze_x, gaze_y.
enum class StreamPipeline { PupilWindow, IafCourse, PursuitDeviation };

std::string_view to_string(StreamPipeline pipeline) noexcept;
StreamPipeline parse_pipeline(std::string_view text);

struct StreamConfig {
  StreamPipeline pipeline{StreamPipeline::PupilWindow};
  double rate_hz{defaults::kGazeRateHz};
  std::vector<Channel> channels{{"pupil", "mm"}};
  double window_s{defaults::kPupilWindowS};
  double hop_s{defaults::kPupilWindowS};
  double t0_s{0.0};  // windows anchor here, not at wall-clock time
  double capacity_s{defaults::kStreamCapacityS};
  BandSpec band = BandSpec::range(8.0, 12.0);  // IafCourse only
};

struct Decision {
  std::size_t index{0};
  double start_s{0.0};
  double end_s{0.0};
  std::vector<double> features;
  double label{0.0};
  double score{0.0};

  bool operator==(const Decision&) const = default;
};

enum class Difficulty { Easy, Difficult };
std::string_view to_string(Difficulty difficulty) noexcept;
Difficulty parse_difficulty(std::string_view text);

struct DifficultyCommand {
  double at_time_s{0.0};         // end of the triggering window
  double effective_time_s{0.0};  // next task boundary at or after at_time_s
  Difficulty new_difficulty{Difficulty::Easy};
  bool triggering_high{false};
  std::size_t decision_index{0};
};

// Controller state. Tasks start every task_period_s from task_origin_s; a
// period of 0 lets commands take effect immediately.
struct DifficultyController {
  Difficulty current{Difficulty::Difficult};
  double task_period_s{0.0};
  double task_origin_s{0.0};
  double high_label{1.0};  // model label meaning high workload
};

// Feature vector of one window; `window` is channel-major.
std::vector<double> window_features(const StreamConfig& config,
                                    std::span<const std::vector<double>> window);

// Single-owner incremental session. push() may be called with any split of
// the input; each completed window yields exactly one decision, computed by
// the same code path as batch_decisions().
class StreamSession {
 public:
  StreamSession(StreamConfig config, LinearModel model,
                std::optional<DifficultyController> controller = std::nullopt);

  // Channel-major chunk (one vector per configured channel). Throws
  // ChannelMismatch for a wrong layout and BufferOverflow when buffered plus
  // incoming samples exceed the capacity; in both cases nothing is consumed.
  std::vector<Decision> push(std::span<const std::vector<double>> chunk);
  std::vector<Decision> push(const TimeSeries& chunk);

  const StreamConfig& config() const noexcept { return config_; }
  const LinearModel& model() const noexcept { return model_; }
  const std::vector<Decision>& decisions() const noexcept { return decisions_; }
  const std::vector<DifficultyCommand>& commands() const noexcept { return commands_; }
  const std::optional<DifficultyController>& controller() const noexcept { return controller_; }
  std::size_t samples_seen() const noexcept { return consumed_ + buffered(); }
  std::size_t buffered() const noexcept { return buffer_.empty() ? 0 : buffer_.front().size(); }
  std::size_t capacity_samples() const noexcept { return capacity_; }
  std::size_t push_count() const noexcept { return pushes_; }

  // Records a command in the session log when one is issued.
  friend std::optional<DifficultyCommand> adapt_difficulty(StreamSession& session,
                                                           const Decision& decision);

 private:
  StreamConfig config_;
  LinearModel model_;
  std::optional<DifficultyController> controller_;
  std::size_t window_len_{0};
  std::size_t hop_len_{0};
  std::size_t capacity_{0};
  std::vector<std::vector<double>> buffer_;
  std::size_t consumed_{0};  // absolute index of buffer_[.][0]
  std::size_t next_window_{0};
  std::size_t pushes_{0};
  std::vector<Decision> decisions_;
  std::vector<DifficultyCommand> commands_;
};

// High workload -> Easy, low -> Difficult; nothing if the controller is
// already there. Updates the controller state.
std::optional<DifficultyCommand> adapt_difficulty(DifficultyController& controller,
                                                  const Decision& decision);
std::optional<DifficultyCommand> adapt_difficulty(StreamSession& session, const Decision& decision);

// Every complete window of a recording, evaluated in one pass.
std::vector<Decision> batch_decisions(const StreamConfig& config, const LinearModel& model,
                                      std::span<const std::vector<double>> data);
std::vector<Decision> batch_decisions(const StreamConfig& config, const LinearModel& model,
                                      const TimeSeries& recording);

// JSON record of the session: configuration, model, every decision with its
// features, commands, and summary counts.
std::string session_report(const StreamSession& session);

}  // namespace cogload
