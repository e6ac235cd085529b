#include "cogload/synth.hpp"

#include "cogload/error.hpp"
#include "cogload/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace cogload {

std::size_t NBackSchedule::match_count() const {
  return static_cast<std::size_t>(std::count(is_match.begin(), is_match.end(), true));
}

std::vector<bool> nback_matches(int n, std::span<const int> stimuli) {
  if (n < 0) throw Error(Errc::InvalidArgument, "n must be non-negative");
  std::vector<bool> match(stimuli.size(), false);
  const auto back = static_cast<std::size_t>(n);
  for (std::size_t i = 0; i < stimuli.size(); ++i) {
    match[i] = n == 0 || (i >= back && stimuli[i] == stimuli[i - back]);
  }
  return match;
}

NBackSchedule nback_from_stimuli(int n, std::vector<int> stimuli, double display_s,
                                 double blank_s) {
  for (int d : stimuli) {
    if (d < 0 || d > 9) throw Error(Errc::InvalidArgument, "stimuli must be digits 0-9");
  }
  NBackSchedule s;
  s.n = n;
  s.is_match = nback_matches(n, stimuli);
  s.stimuli = std::move(stimuli);
  s.display_s = display_s;
  s.blank_s = blank_s;
  for (std::size_t i = 0; i < s.stimuli.size(); ++i) {
    s.onset_times_s.push_back(static_cast<double>(i) * (display_s + blank_s));
  }
  return s;
}

NBackSchedule gen_nback_schedule(int n, std::size_t length, double target_match_rate,
                                 std::uint64_t seed, double display_s, double blank_s) {
  if (n < 0) throw Error(Errc::InvalidArgument, "n must be non-negative");
  if (length == 0) throw Error(Errc::InvalidArgument, "schedule length must be >= 1");
  if (target_match_rate < 0.0 || target_match_rate > 1.0) {
    throw Error(Errc::InvalidArgument, "match rate must lie in [0, 1]");
  }
  const auto back = static_cast<std::size_t>(n);
  if (n > 0 && back >= length && target_match_rate > 0.0) {
    throw Error(Errc::InfeasibleRate, "no position can match when n >= length");
  }

  Rng digits(seed, stream_id("nback-digits"));
  std::vector<int> stimuli(length);
  if (n == 0) {
    for (auto& d : stimuli) d = static_cast<int>(digits.below(10));
    return nback_from_stimuli(0, std::move(stimuli), display_s, blank_s);
  }

  const std::size_t eligible = length > back ? length - back : 0;
  const auto matches =
      static_cast<std::size_t>(std::llround(target_match_rate * static_cast<double>(eligible)));
  std::vector<std::size_t> positions(eligible);
  for (std::size_t i = 0; i < eligible; ++i) positions[i] = back + i;
  Rng order(seed, stream_id("nback-positions"));
  for (std::size_t i = eligible; i > 1; --i) {
    std::swap(positions[i - 1], positions[order.below(i)]);
  }
  std::vector<bool> want(length, false);
  for (std::size_t i = 0; i < matches; ++i) want[positions[i]] = true;

  for (std::size_t i = 0; i < length; ++i) {
    if (i < back) {
      stimuli[i] = static_cast<int>(digits.below(10));
    } else if (want[i]) {
      stimuli[i] = stimuli[i - back];
    } else {
      int d = static_cast<int>(digits.below(9));
      if (d >= stimuli[i - back]) ++d;
      stimuli[i] = d;
    }
  }
  return nback_from_stimuli(n, std::move(stimuli), display_s, blank_s);
}

double Envelope::operator()(double t) const {
  switch (kind) {
    case Kind::Constant: return before;
    case Kind::Step: return t < start_s ? before : after;
    case Kind::Window: return (t >= start_s && t < end_s) ? after : before;
    case Kind::Ramp: {
      if (t <= start_s) return before;
      if (t >= end_s) return after;
      return before + (after - before) * (t - start_s) / (end_s - start_s);
    }
  }
  return before;
}

std::string_view to_string(SynthKind kind) noexcept {
  switch (kind) {
    case SynthKind::Eeg: return "eeg";
    case SynthKind::Gaze: return "gaze";
    case SynthKind::Pupil: return "pupil";
  }
  return "?";
}

namespace {

std::string_view envelope_kind_name(Envelope::Kind kind) {
  switch (kind) {
    case Envelope::Kind::Constant: return "constant";
    case Envelope::Kind::Step: return "step";
    case Envelope::Kind::Window: return "window";
    case Envelope::Kind::Ramp: return "ramp";
  }
  return "constant";
}

Envelope::Kind parse_envelope_kind(const std::string& text) {
  if (text == "constant") return Envelope::Kind::Constant;
  if (text == "step") return Envelope::Kind::Step;
  if (text == "window") return Envelope::Kind::Window;
  if (text == "ramp") return Envelope::Kind::Ramp;
  throw Error(Errc::ParseError, "unknown envelope kind '" + text + "'");
}

std::string join_doubles(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ",";
    out += format_double(values[i]);
  }
  return out;
}

void put_envelope(KeyValues& kv, const std::string& prefix, const Envelope& env) {
  kv[prefix + "kind"] = std::string(envelope_kind_name(env.kind));
  kv[prefix + "start_s"] = format_double(env.start_s);
  kv[prefix + "end_s"] = format_double(env.end_s);
  kv[prefix + "before"] = format_double(env.before);
  kv[prefix + "after"] = format_double(env.after);
}

Envelope get_envelope(const KeyValues& kv, const std::string& prefix, const Envelope& fallback) {
  Envelope env = fallback;
  if (kv.count(prefix + "kind")) env.kind = parse_envelope_kind(kv.at(prefix + "kind"));
  env.start_s = kv_double(kv, prefix + "start_s", env.start_s);
  env.end_s = kv_double(kv, prefix + "end_s", env.end_s);
  env.before = kv_double(kv, prefix + "before", env.before);
  env.after = kv_double(kv, prefix + "after", env.after);
  return env;
}

}  // namespace

KeyValues to_key_values(const SynthSpec& spec) {
  KeyValues kv;
  kv["kind"] = std::string(to_string(spec.kind));
  kv["duration_s"] = format_double(spec.duration_s);
  kv["rate_hz"] = format_double(spec.rate_hz);
  kv["seed"] = std::to_string(spec.seed);
  switch (spec.kind) {
    case SynthKind::Eeg: {
      std::string channels;
      for (std::size_t c = 0; c < spec.channels.size(); ++c) {
        if (c) channels += ",";
        channels += spec.channels[c].label + ":" + spec.channels[c].unit;
      }
      kv["channels"] = channels;
      kv["noise_sigma"] = format_double(spec.noise_sigma);
      kv["components"] = std::to_string(spec.components.size());
      for (std::size_t j = 0; j < spec.components.size(); ++j) {
        const auto& comp = spec.components[j];
        const std::string p = "component." + std::to_string(j) + ".";
        kv[p + "freq_hz"] = format_double(comp.freq_hz);
        kv[p + "amplitude"] = format_double(comp.amplitude);
        kv[p + "mixing"] = join_doubles(comp.mixing);
        if (comp.phase_rad) kv[p + "phase_rad"] = format_double(*comp.phase_rad);
        if (comp.stream) kv[p + "stream"] = std::to_string(*comp.stream);
        put_envelope(kv, p + "envelope.", comp.envelope);
      }
      kv["noise_sources"] = std::to_string(spec.noise_sources.size());
      for (std::size_t s = 0; s < spec.noise_sources.size(); ++s) {
        const std::string p = "noise_source." + std::to_string(s) + ".";
        kv[p + "sigma"] = format_double(spec.noise_sources[s].sigma);
        kv[p + "mixing"] = join_doubles(spec.noise_sources[s].mixing);
      }
      break;
    }
    case SynthKind::Gaze:
      kv["shape"] = std::string(to_string(spec.shape));
      kv["speed_px_s"] = format_double(spec.speed_px_s);
      kv["noise_sigma_px"] = format_double(spec.noise_sigma_px);
      kv["lag_ms"] = format_double(spec.lag_ms);
      break;
    case SynthKind::Pupil:
      kv["base_mm"] = format_double(spec.base_mm);
      kv["gain_mm"] = format_double(spec.gain_mm);
      kv["noise_sigma_mm"] = format_double(spec.noise_sigma_mm);
      put_envelope(kv, "workload.", spec.workload);
      break;
  }
  return kv;
}

SynthSpec synth_spec_from(const KeyValues& kv) {
  SynthSpec spec;
  const auto kind = kv_string(kv, "kind", "eeg");
  if (kind == "eeg") {
    spec.kind = SynthKind::Eeg;
  } else if (kind == "gaze") {
    spec.kind = SynthKind::Gaze;
  } else if (kind == "pupil") {
    spec.kind = SynthKind::Pupil;
  } else {
    throw Error(Errc::ParseError, "unknown synth kind '" + kind + "'");
  }
  spec.duration_s = kv_double(kv, "duration_s", spec.duration_s);
  spec.rate_hz = kv_double(kv, "rate_hz", spec.rate_hz);
  spec.seed = static_cast<std::uint64_t>(kv_int(kv, "seed", static_cast<long long>(spec.seed)));

  if (const auto channels = kv_string(kv, "channels", ""); !channels.empty()) {
    for (const auto& item : split(channels, ',')) {
      const auto colon = item.find(':');
      spec.channels.push_back(colon == std::string::npos
                                  ? Channel{item, "uV"}
                                  : Channel{item.substr(0, colon), item.substr(colon + 1)});
    }
  }
  spec.noise_sigma = kv_double(kv, "noise_sigma", spec.noise_sigma);
  const auto components = kv_int(kv, "components", 0);
  for (long long j = 0; j < components; ++j) {
    const std::string p = "component." + std::to_string(j) + ".";
    EegComponent comp;
    comp.freq_hz = kv_double(kv, p + "freq_hz", comp.freq_hz);
    comp.amplitude = kv_double(kv, p + "amplitude", comp.amplitude);
    comp.mixing = kv_doubles(kv, p + "mixing");
    if (kv.count(p + "phase_rad")) comp.phase_rad = kv_double(kv, p + "phase_rad", 0.0);
    if (kv.count(p + "stream")) {
      comp.stream = static_cast<std::uint64_t>(kv_int(kv, p + "stream", 0));
    }
    comp.envelope = get_envelope(kv, p + "envelope.", comp.envelope);
    spec.components.push_back(std::move(comp));
  }
  const auto sources = kv_int(kv, "noise_sources", 0);
  for (long long s = 0; s < sources; ++s) {
    const std::string p = "noise_source." + std::to_string(s) + ".";
    spec.noise_sources.push_back({kv_double(kv, p + "sigma", 1.0), kv_doubles(kv, p + "mixing")});
  }

  if (kv.count("shape")) spec.shape = parse_shape(kv.at("shape"));
  spec.speed_px_s = kv_double(kv, "speed_px_s", spec.speed_px_s);
  spec.noise_sigma_px = kv_double(kv, "noise_sigma_px", spec.noise_sigma_px);
  spec.lag_ms = kv_double(kv, "lag_ms", spec.lag_ms);

  spec.base_mm = kv_double(kv, "base_mm", spec.base_mm);
  spec.gain_mm = kv_double(kv, "gain_mm", spec.gain_mm);
  spec.noise_sigma_mm = kv_double(kv, "noise_sigma_mm", spec.noise_sigma_mm);
  spec.workload = get_envelope(kv, "workload.", spec.workload);
  return spec;
}

namespace {

double mixing_at(const std::vector<double>& mixing, std::size_t c, std::size_t channels) {
  if (mixing.empty()) return 1.0;
  if (mixing.size() != channels) {
    throw Error(Errc::DimensionMismatch, "mixing vector has " + std::to_string(mixing.size()) +
                                             " entries for " + std::to_string(channels) +
                                             " channels");
  }
  return mixing[c];
}

}  // namespace

TimeSeries gen_eeg(const SynthSpec& spec) {
  if (!(spec.rate_hz > 0.0) || spec.duration_s < 0.0) {
    throw Error(Errc::InvalidArgument, "synthetic EEG needs a positive rate");
  }
  std::vector<Channel> channels = spec.channels;
  if (channels.empty()) channels.push_back(Channel{"ch1", "uV"});
  const std::size_t nc = channels.size();
  const auto n = static_cast<std::size_t>(std::llround(spec.duration_s * spec.rate_hz));
  std::vector<std::vector<double>> data(nc, std::vector<double>(n, 0.0));

  for (std::size_t j = 0; j < spec.components.size(); ++j) {
    const auto& comp = spec.components[j];
    if (comp.freq_hz >= spec.rate_hz / 2.0 || comp.freq_hz < 0.0) {
      throw Error(Errc::NyquistViolation, "component at " + std::to_string(comp.freq_hz) +
                                              " Hz is not below Nyquist");
    }
    const std::uint64_t id = comp.stream.value_or(j);
    double phase = 0.0;
    if (comp.phase_rad) {
      phase = *comp.phase_rad;
    } else {
      Rng rng(spec.seed, stream_id("phase", id));
      phase = 2.0 * std::numbers::pi * rng.uniform();
    }
    for (std::size_t c = 0; c < nc; ++c) {
      const double gain = mixing_at(comp.mixing, c, nc) * comp.amplitude;
      if (gain == 0.0) continue;
      for (std::size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) / spec.rate_hz;
        data[c][k] +=
            gain * comp.envelope(t) * std::sin(2.0 * std::numbers::pi * comp.freq_hz * t + phase);
      }
    }
  }
  if (spec.noise_sigma > 0.0) {
    for (std::size_t c = 0; c < nc; ++c) {
      Rng rng(spec.seed, stream_id("noise", c));
      for (auto& v : data[c]) v += spec.noise_sigma * rng.normal();
    }
  }
  for (std::size_t s = 0; s < spec.noise_sources.size(); ++s) {
    const auto& src = spec.noise_sources[s];
    Rng rng(spec.seed, stream_id("noise-source", s));
    std::vector<double> gains(nc);
    for (std::size_t c = 0; c < nc; ++c) gains[c] = mixing_at(src.mixing, c, nc) * src.sigma;
    for (std::size_t k = 0; k < n; ++k) {
      const double z = rng.normal();
      for (std::size_t c = 0; c < nc; ++c) data[c][k] += gains[c] * z;
    }
  }
  return TimeSeries(spec.rate_hz, std::move(channels), std::move(data));
}

GazeTrace gen_gaze(const TrajectoryPath& path, double noise_sigma_px, double lag_ms,
                   std::uint64_t seed) {
  if (lag_ms < 0.0) throw Error(Errc::InvalidArgument, "lag must be non-negative");
  if (noise_sigma_px < 0.0) throw Error(Errc::InvalidArgument, "noise sigma must be non-negative");
  GazeTrace gaze;
  gaze.rate_hz = path.rate_hz;
  gaze.points.reserve(path.size());
  gaze.valid.assign(path.size(), true);
  Rng noise_x(seed, stream_id("gaze-x"));
  Rng noise_y(seed, stream_id("gaze-y"));
  const double lag_s = lag_ms / 1000.0;
  for (std::size_t k = 0; k < path.size(); ++k) {
    Point2 p = lag_s == 0.0 ? path.points[k] : position_at(path, path.time_at(k) - lag_s);
    p.x += noise_sigma_px * noise_x.normal();
    p.y += noise_sigma_px * noise_y.normal();
    gaze.points.push_back(p);
  }
  return gaze;
}

TimeSeries gen_pupil(double base_mm, const std::function<double(double)>& workload_envelope,
                     double gain_mm, double noise_sigma_mm, double rate_hz, double duration_s,
                     std::uint64_t seed) {
  if (!(base_mm > 0.0)) throw Error(Errc::InvalidArgument, "base diameter must be positive");
  if (gain_mm < 0.0) throw Error(Errc::InvalidArgument, "gain must be non-negative");
  if (!(rate_hz > 0.0) || duration_s < 0.0) {
    throw Error(Errc::InvalidArgument, "pupil synthesis needs a positive rate");
  }
  const auto n = static_cast<std::size_t>(std::llround(duration_s * rate_hz));
  std::vector<double> diam(n);
  Rng rng(seed, stream_id("pupil"));
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) / rate_hz;
    diam[k] = base_mm + gain_mm * workload_envelope(t) + noise_sigma_mm * rng.normal();
  }
  return make_series(rate_hz, "pupil", std::move(diam), "mm");
}

TimeSeries gen_pupil(const SynthSpec& spec) {
  return gen_pupil(spec.base_mm, spec.workload, spec.gain_mm, spec.noise_sigma_mm, spec.rate_hz,
                   spec.duration_s, spec.seed);
}

}  // namespace cogload
