#pragma once

#include "cogload/config.hpp"
#include "cogload/defaults.hpp"
#include "cogload/gaze.hpp"
#include "cogload/timeseries.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace cogload {

// ---------------------------------------------------------------------------
// N-back schedules

struct NBackSchedule {
  int n{0};
  std::vector<int> stimuli;  // digits 0-9
  std::vector<bool> is_match;
  double display_s{defaults::kNBackDisplayS};
  double blank_s{defaults::kNBackBlankS};
  std::vector<double> onset_times_s;

  std::size_t match_count() const;
  // Time from the first onset to the end of the last blank.
  double span_s() const {
    return static_cast<double>(stimuli.size()) * (display_s + blank_s);
  }
};

// Match flags implied by the n-back rule. For n = 0 every stimulus matches;
// otherwise position i matches iff i >= n and stimuli[i] == stimuli[i - n].
std::vector<bool> nback_matches(int n, std::span<const int> stimuli);

NBackSchedule nback_from_stimuli(int n, std::vector<int> stimuli,
                                 double display_s = defaults::kNBackDisplayS,
                                 double blank_s = defaults::kNBackBlankS);

// Exactly round(rate * (length - n)) of the positions i >= n are matches,
// chosen by a seeded shuffle; digits are then filled in to agree with the
// chosen flags, so no resampling is needed.
NBackSchedule gen_nback_schedule(int n, std::size_t length, double target_match_rate,
                                 std::uint64_t seed,
                                 double display_s = defaults::kNBackDisplayS,
                                 double blank_s = defaults::kNBackBlankS);

// ---------------------------------------------------------------------------
// Synthetic signals

// Piecewise amplitude envelope over time.
struct Envelope {
  enum class Kind { Constant, Step, Window, Ramp };

  Kind kind{Kind::Constant};
  double start_s{0.0};
  double end_s{0.0};
  double before{1.0};  // Constant uses `before` as its level
  double after{1.0};

  static Envelope constant(double level) { return {Kind::Constant, 0.0, 0.0, level, level}; }
  // `before` until t_s, `after` from t_s on.
  static Envelope step(double t_s, double before, double after) {
    return {Kind::Step, t_s, t_s, before, after};
  }
  // 1 inside [start, end), 0 outside.
  static Envelope window(double start_s, double end_s) {
    return {Kind::Window, start_s, end_s, 0.0, 1.0};
  }
  // Linear from `from` at start to `to` at end, held constant outside.
  static Envelope ramp(double start_s, double end_s, double from, double to) {
    return {Kind::Ramp, start_s, end_s, from, to};
  }

  double operator()(double t) const;
};

struct EegComponent {
  double freq_hz{10.0};
  double amplitude{1.0};
  std::vector<double> mixing;  // per channel; empty = 1 on every channel
  Envelope envelope;
  std::optional<double> phase_rad;       // default: drawn from (seed, stream)
  std::optional<std::uint64_t> stream;   // default: component index
};

// Broadband white source projected onto the channels.
struct NoiseSource {
  double sigma{1.0};
  std::vector<double> mixing;
};

enum class SynthKind { Eeg, Gaze, Pupil };

struct SynthSpec {
  SynthKind kind{SynthKind::Eeg};
  double duration_s{60.0};
  double rate_hz{250.0};
  std::uint64_t seed{1};

  // eeg
  std::vector<Channel> channels;
  std::vector<EegComponent> components;
  double noise_sigma{0.0};  // independent white noise per channel
  std::vector<NoiseSource> noise_sources;

  // gaze
  TrajectoryShape shape{TrajectoryShape::Circle};
  double speed_px_s{defaults::kSlowSpeedPxS};
  double noise_sigma_px{0.0};
  double lag_ms{0.0};

  // pupil
  double base_mm{3.5};
  double gain_mm{0.3};
  double noise_sigma_mm{0.05};
  Envelope workload = Envelope::constant(0.0);
};

std::string_view to_string(SynthKind kind) noexcept;

// Round-trips through the flat key-value config format.
KeyValues to_key_values(const SynthSpec& spec);
SynthSpec synth_spec_from(const KeyValues& kv);

// data[c][k] = sum_j mixing[j][c] * amp_j * env_j(t_k) * sin(2 pi f_j t_k + phi_j)
//            + noise_sigma * n_c[k] + sum_s mixing_s[c] * sigma_s * m_s[k]
// with t_k = k / rate and every random stream derived from spec.seed.
TimeSeries gen_eeg(const SynthSpec& spec);

// gaze(t) = path(t - lag) + N(0, sigma^2) per axis; all samples valid.
GazeTrace gen_gaze(const TrajectoryPath& path, double noise_sigma_px, double lag_ms,
                   std::uint64_t seed);

// diameter(t) = base + gain * envelope(t) + N(0, sigma^2), one "pupil" channel in mm.
TimeSeries gen_pupil(double base_mm, const std::function<double(double)>& workload_envelope,
                     double gain_mm, double noise_sigma_mm, double rate_hz, double duration_s,
                     std::uint64_t seed);
TimeSeries gen_pupil(const SynthSpec& spec);

}  // namespace cogload
