#include "cogload/stream.hpp"

#include "cogload/config.hpp"
#include "cogload/error.hpp"

#include "json.hpp"

#include <cmath>

namespace cogload {

using nlohmann::json;

std::string_view to_string(StreamPipeline pipeline) noexcept {
  switch (pipeline) {
    case StreamPipeline::PupilWindow: return "pupil-window";
    case StreamPipeline::IafCourse: return "iaf-course";
    case StreamPipeline::PursuitDeviation: return "pursuit-deviation";
  }
  return "?";
}

StreamPipeline parse_pipeline(std::string_view text) {
  if (text == "pupil-window") return StreamPipeline::PupilWindow;
  if (text == "iaf-course") return StreamPipeline::IafCourse;
  if (text == "pursuit-deviation") return StreamPipeline::PursuitDeviation;
  throw Error(Errc::InvalidArgument, "unknown stream pipeline '" + std::string(text) + "'");
}

std::string_view to_string(Difficulty difficulty) noexcept {
  return difficulty == Difficulty::Easy ? "easy" : "difficult";
}

Difficulty parse_difficulty(std::string_view text) {
  if (text == "easy") return Difficulty::Easy;
  if (text == "difficult") return Difficulty::Difficult;
  throw Error(Errc::InvalidArgument, "unknown difficulty '" + std::string(text) + "'");
}

namespace {

// Window rows as spans into a channel-major buffer.
std::vector<std::span<const double>> window_rows(std::span<const std::vector<double>> data,
                                                 std::size_t begin, std::size_t len) {
  std::vector<std::span<const double>> rows;
  rows.reserve(data.size());
  for (const auto& row : data) rows.emplace_back(row.data() + begin, len);
  return rows;
}

std::vector<double> features_of(const StreamConfig& config,
                                const std::vector<std::span<const double>>& rows) {
  switch (config.pipeline) {
    case StreamPipeline::PupilWindow: {
      double sum = 0.0;
      std::size_t valid = 0;
      for (double v : rows.at(0)) {
        if (std::isfinite(v)) {
          sum += v;
          ++valid;
        }
      }
      if (valid == 0) throw Error(Errc::NoValidSamples, "pupil window holds no valid samples");
      return {sum / static_cast<double>(valid)};
    }
    case StreamPipeline::IafCourse: {
      double total = 0.0;
      for (const auto& row : rows) {
        const auto filtered = bandpass(row, config.rate_hz, defaults::kPrefilterLowHz,
                                       defaults::kPrefilterHighHz);
        const auto plan = make_window_plan(config.rate_hz, filtered.size(),
                                           defaults::kFrameWindowS, defaults::kFrameHopS);
        const auto bp = band_power(stft_power(filtered, config.rate_hz, plan), config.band);
        double mean = 0.0;
        for (double v : bp) mean += v;
        total += mean / static_cast<double>(bp.size());
      }
      return {total / static_cast<double>(rows.size())};
    }
    case StreamPipeline::PursuitDeviation: {
      if (rows.size() != 4) {
        throw Error(Errc::ChannelMismatch, "pursuit stream needs path_x, path_y, gaze_x, gaze_y");
      }
      double sum = 0.0;
      std::size_t valid = 0;
      for (std::size_t k = 0; k < rows[0].size(); ++k) {
        const double d = std::hypot(rows[0][k] - rows[2][k], rows[1][k] - rows[3][k]);
        if (std::isfinite(d)) {
          sum += d;
          ++valid;
        }
      }
      if (valid == 0) throw Error(Errc::NoValidSamples, "pursuit window holds no valid samples");
      return {sum / static_cast<double>(valid)};
    }
  }
  return {};
}

Decision make_decision(const StreamConfig& config, const LinearModel& model, std::size_t index,
                       std::size_t start, std::size_t len,
                       const std::vector<std::span<const double>>& rows) {
  Decision d;
  d.index = index;
  d.start_s = config.t0_s + static_cast<double>(start) / config.rate_hz;
  d.end_s = config.t0_s + static_cast<double>(start + len) / config.rate_hz;
  d.features = features_of(config, rows);
  d.score = decision_scores(model, d.features).front();
  d.label = predict(model, d.features);
  return d;
}

std::size_t seconds_to_samples(double seconds, double rate_hz, const char* what) {
  const auto n = std::llround(seconds * rate_hz);
  if (n < 1) {
    throw Error(Errc::ZeroLengthWindow, std::string(what) + " is shorter than one sample");
  }
  return static_cast<std::size_t>(n);
}

void check_layout(const StreamConfig& config, std::span<const std::vector<double>> data) {
  if (data.size() != config.channels.size()) {
    throw Error(Errc::ChannelMismatch, "expected " + std::to_string(config.channels.size()) +
                                           " channels, got " + std::to_string(data.size()));
  }
  for (const auto& row : data) {
    if (row.size() != data.front().size()) {
      throw Error(Errc::ChannelMismatch, "channels differ in length");
    }
  }
}

}  // namespace

std::vector<double> window_features(const StreamConfig& config,
                                    std::span<const std::vector<double>> window) {
  check_layout(config, window);
  return features_of(config, window_rows(window, 0, window.empty() ? 0 : window.front().size()));
}

StreamSession::StreamSession(StreamConfig config, LinearModel model,
                             std::optional<DifficultyController> controller)
    : config_(std::move(config)), model_(std::move(model)), controller_(controller) {
  if (!(config_.rate_hz > 0.0)) throw Error(Errc::InvalidArgument, "stream rate must be positive");
  if (config_.channels.empty()) throw Error(Errc::InvalidArgument, "stream needs channels");
  if (model_.dims() != 1) {
    throw Error(Errc::DimensionMismatch, "stream models take one feature, model has " +
                                             std::to_string(model_.dims()));
  }
  window_len_ = seconds_to_samples(config_.window_s, config_.rate_hz, "window");
  hop_len_ = seconds_to_samples(config_.hop_s, config_.rate_hz, "hop");
  capacity_ = seconds_to_samples(config_.capacity_s, config_.rate_hz, "capacity");
  if (window_len_ > capacity_) {
    throw Error(Errc::InvalidArgument, "window does not fit in the stream buffer");
  }
  buffer_.assign(config_.channels.size(), {});
}

std::vector<Decision> StreamSession::push(std::span<const std::vector<double>> chunk) {
  check_layout(config_, chunk);
  const std::size_t incoming = chunk.empty() ? 0 : chunk.front().size();
  if (buffered() + incoming > capacity_) {
    throw Error(Errc::BufferOverflow, "push of " + std::to_string(incoming) + " samples with " +
                                          std::to_string(buffered()) + " buffered exceeds " +
                                          std::to_string(capacity_));
  }
  // Evaluate before committing, so a failing window leaves the session as it was.
  std::vector<std::vector<double>> next = buffer_;
  for (std::size_t c = 0; c < chunk.size(); ++c) {
    next[c].insert(next[c].end(), chunk[c].begin(), chunk[c].end());
  }
  const std::size_t available = consumed_ + (next.front().size());
  std::vector<Decision> emitted;
  std::size_t window = next_window_;
  while (window * hop_len_ + window_len_ <= available) {
    const std::size_t start = window * hop_len_;
    emitted.push_back(make_decision(config_, model_, window, start, window_len_,
                                    window_rows(next, start - consumed_, window_len_)));
    ++window;
  }
  const std::size_t drop = std::min(window * hop_len_ - consumed_, next.front().size());
  for (auto& row : next) row.erase(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(drop));

  buffer_ = std::move(next);
  consumed_ += drop;
  next_window_ = window;
  ++pushes_;
  decisions_.insert(decisions_.end(), emitted.begin(), emitted.end());
  return emitted;
}

std::vector<Decision> StreamSession::push(const TimeSeries& chunk) {
  if (std::abs(chunk.rate_hz() - config_.rate_hz) > 1e-9 * config_.rate_hz) {
    throw Error(Errc::ChannelMismatch, "chunk rate differs from the session rate");
  }
  if (chunk.labels().size() != config_.channels.size()) {
    throw Error(Errc::ChannelMismatch, "chunk channel layout differs from the session");
  }
  for (std::size_t c = 0; c < config_.channels.size(); ++c) {
    if (chunk.channel(c).label != config_.channels[c].label) {
      throw Error(Errc::ChannelMismatch, "chunk channel " + std::to_string(c) + " is '" +
                                             chunk.channel(c).label + "', expected '" +
                                             config_.channels[c].label + "'");
    }
  }
  return push(chunk.data());
}

std::optional<DifficultyCommand> adapt_difficulty(DifficultyController& controller,
                                                  const Decision& decision) {
  const bool high = decision.label == controller.high_label;
  const Difficulty target = high ? Difficulty::Easy : Difficulty::Difficult;
  if (target == controller.current) return std::nullopt;
  DifficultyCommand cmd;
  cmd.at_time_s = decision.end_s;
  cmd.effective_time_s = decision.end_s;
  if (controller.task_period_s > 0.0) {
    const double tasks = (decision.end_s - controller.task_origin_s) / controller.task_period_s;
    cmd.effective_time_s =
        controller.task_origin_s + std::ceil(tasks - 1e-9) * controller.task_period_s;
  }
  cmd.new_difficulty = target;
  cmd.triggering_high = high;
  cmd.decision_index = decision.index;
  controller.current = target;
  return cmd;
}

std::optional<DifficultyCommand> adapt_difficulty(StreamSession& session, const Decision& decision) {
  if (!session.controller_) {
    throw Error(Errc::InvalidArgument, "session has no difficulty controller");
  }
  auto cmd = adapt_difficulty(*session.controller_, decision);
  if (cmd) session.commands_.push_back(*cmd);
  return cmd;
}

std::vector<Decision> batch_decisions(const StreamConfig& config, const LinearModel& model,
                                      std::span<const std::vector<double>> data) {
  check_layout(config, data);
  const std::size_t window_len = seconds_to_samples(config.window_s, config.rate_hz, "window");
  const std::size_t hop_len = seconds_to_samples(config.hop_s, config.rate_hz, "hop");
  const std::size_t n = data.empty() ? 0 : data.front().size();
  std::vector<Decision> out;
  for (std::size_t w = 0; w * hop_len + window_len <= n; ++w) {
    const std::size_t start = w * hop_len;
    out.push_back(
        make_decision(config, model, w, start, window_len, window_rows(data, start, window_len)));
  }
  return out;
}

std::vector<Decision> batch_decisions(const StreamConfig& config, const LinearModel& model,
                                      const TimeSeries& recording) {
  return batch_decisions(config, model, recording.data());
}

namespace {

json num(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

}  // namespace

std::string session_report(const StreamSession& session) {
  const auto& cfg = session.config();
  json j;
  j["format"] = "cogload-stream-session";
  j["version"] = 1;
  json channels = json::array();
  for (const auto& ch : cfg.channels) channels.push_back({{"label", ch.label}, {"unit", ch.unit}});
  j["config"] = {{"pipeline", std::string(to_string(cfg.pipeline))},
                 {"rate_hz", num(cfg.rate_hz)},
                 {"channels", channels},
                 {"window_s", num(cfg.window_s)},
                 {"hop_s", num(cfg.hop_s)},
                 {"t0_s", num(cfg.t0_s)},
                 {"capacity_s", num(cfg.capacity_s)},
                 {"band", {{"center_hz", num(cfg.band.center_hz)},
                           {"low_hz", num(cfg.band.low_hz)},
                           {"high_hz", num(cfg.band.high_hz)}}}};
  j["model"] = json::parse(model_to_json(session.model()));

  json decisions = json::array();
  for (const auto& d : session.decisions()) {
    json features = json::array();
    for (double f : d.features) features.push_back(num(f));
    decisions.push_back({{"index", d.index},
                         {"start_s", num(d.start_s)},
                         {"end_s", num(d.end_s)},
                         {"features", features},
                         {"label", num(d.label)},
                         {"score", num(d.score)}});
  }
  j["decisions"] = decisions;

  json commands = json::array();
  for (const auto& c : session.commands()) {
    commands.push_back({{"at_time_s", num(c.at_time_s)},
                        {"effective_time_s", num(c.effective_time_s)},
                        {"new_difficulty", std::string(to_string(c.new_difficulty))},
                        {"triggering_label", c.triggering_high ? "high" : "low"},
                        {"decision_index", c.decision_index}});
  }
  j["commands"] = commands;
  if (const auto& ctl = session.controller()) {
    j["controller"] = {{"current", std::string(to_string(ctl->current))},
                       {"task_period_s", num(ctl->task_period_s)},
                       {"task_origin_s", num(ctl->task_origin_s)}};
  }
  j["summary"] = {{"decision_count", session.decisions().size()},
                  {"difficulty_switches", session.commands().size()},
                  {"samples_seen", session.samples_seen()},
                  {"push_count", session.push_count()},
                  {"window_duration_s", num(cfg.window_s)},
                  {"covered_s", num(static_cast<double>(session.samples_seen()) / cfg.rate_hz)}};
  return j.dump(2);
}

}  // namespace cogload
