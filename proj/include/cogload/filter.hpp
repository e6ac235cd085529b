#pragma once

#include <complex>
#include <span>
#include <vector>

namespace cogload {

// Direct-form II transposed second-order section, a0 normalized to 1.
struct Biquad {
  double b0{1.0}, b1{0.0}, b2{0.0};
  double a1{0.0}, a2{0.0};
};

// Cascade of second-order sections.
struct SosFilter {
  std::vector<Biquad> sections;

  std::complex<double> response(double freq_hz, double rate_hz) const;
  double gain(double freq_hz, double rate_hz) const { return std::abs(response(freq_hz, rate_hz)); }
};

// Butterworth designs via the bilinear transform with pre-warped edges.
// `order` is the order of the analog low-pass prototype, so the band-pass
// cascade has 2 * order poles and unit gain at the geometric band centre.
SosFilter butterworth_lowpass(double rate_hz, double cutoff_hz, int order);
SosFilter butterworth_bandpass(double rate_hz, double low_hz, double high_hz, int order);

// Causal filtering. When `initial_level` is given the sections start in the
// steady state reached by a constant input of that level.
std::vector<double> sosfilt(const SosFilter& filter, std::span<const double> x,
                            const double* initial_level = nullptr);

// Forward-backward (zero-phase) filtering with odd-reflection padding and
// steady-state initial conditions at both ends.
std::vector<double> sosfiltfilt(const SosFilter& filter, std::span<const double> x);

}  // namespace cogload
