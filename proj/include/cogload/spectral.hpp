#pragma once

#include "cogload/defaults.hpp"
#include "cogload/timeseries.hpp"

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace cogload {

// Frequency band in Hz. Invariant: 0 < low <= centre <= high, low < high.
struct BandSpec {
  double center_hz{0.0};
  double low_hz{0.0};
  double high_hz{0.0};

  BandSpec() = default;
  BandSpec(double center, double low, double high);

  static BandSpec around(double center_hz, double half_width_hz) {
    return BandSpec(center_hz, center_hz - half_width_hz, center_hz + half_width_hz);
  }
  static BandSpec range(double low_hz, double high_hz) {
    return BandSpec(0.5 * (low_hz + high_hz), low_hz, high_hz);
  }

  bool contains(double freq_hz) const noexcept { return freq_hz >= low_hz && freq_hz <= high_hz; }
  bool operator==(const BandSpec&) const = default;
};

inline BandSpec default_iaf_search_band() {
  return BandSpec::range(defaults::kIafSearchLowHz, defaults::kIafSearchHighHz);
}
inline BandSpec theta_band() {
  return BandSpec::around(defaults::kThetaCenterHz, defaults::kThetaHalfWidthHz);
}

// One-sided short-time power spectrum.
//
// frames[f][b] is the power of bin b in frame f, using a periodic Hann taper
// and the normalization
//
//   P[b] = c_b * |U[b]|^2 / (N * sum_n w[n]^2),   c_b = 1 at DC/Nyquist, else 2
//
// where U is the DFT of the tapered frame. With this scaling the bins of a
// frame sum to the taper-weighted mean square of the frame,
// sum_n (w[n] x[n])^2 / sum_n w[n]^2, so a sinusoid of amplitude A carries
// total power A^2 / 2 regardless of the taper.
struct Spectrogram {
  std::vector<double> freqs_hz;
  std::vector<std::vector<double>> frames;
  WindowPlan plan;
  double rate_hz{0.0};
  double t0_s{0.0};

  std::size_t bin_count() const noexcept { return freqs_hz.size(); }
  // Window-centre time of a frame.
  double frame_time(std::size_t frame) const noexcept {
    return t0_s + (static_cast<double>(plan.frame_start(frame)) +
                   0.5 * static_cast<double>(plan.window_len)) /
                      rate_hz;
  }
};

struct SsdResult {
  Eigen::MatrixXd filters;   // components x channels
  Eigen::MatrixXd patterns;  // channels x components
  std::vector<double> eigenvalues;  // descending signal-to-flank power ratios
  Eigen::MatrixXd signal_cov;
  Eigen::MatrixXd noise_cov;  // regularized flank covariance
};

// Zero-phase Butterworth band-pass (forward-backward). low_hz == 0 gives a
// low-pass.
std::vector<double> bandpass(std::span<const double> x, double rate_hz, double low_hz,
                             double high_hz, int order = defaults::kBandpassOrder);
TimeSeries bandpass(const TimeSeries& series, double low_hz, double high_hz,
                    int order = defaults::kBandpassOrder);

Spectrogram stft_power(std::span<const double> x, double rate_hz, const WindowPlan& plan,
                       double t0_s = 0.0);
Spectrogram stft_power(const TimeSeries& series, const WindowPlan& plan);

// Per-frame mean power over bins with low <= f <= high.
std::vector<double> band_power(const Spectrogram& spec, const BandSpec& band);

// Mean over frames, per bin.
std::vector<double> mean_spectrum(const Spectrogram& spec);

// Individual alpha band from an eyes-open / eyes-closed pair: the bin within
// `search` where the mean closed-minus-open spectrum peaks, +- half_width.
BandSpec detect_iaf(const TimeSeries& eyes_open, const TimeSeries& eyes_closed,
                    const BandSpec& search = default_iaf_search_band(),
                    double half_width_hz = defaults::kIafHalfWidthHz,
                    double window_s = defaults::kFrameWindowS,
                    double hop_s = defaults::kFrameHopS);

// Spatio-spectral decomposition: spatial filters maximizing in-band power
// relative to the flanking bands [low-gap-flank, low-gap] and
// [high+gap, high+gap+flank]. The flank covariance is shrunk towards a scaled
// identity by `shrinkage` before solving S w = mu N w.
SsdResult ssd(const TimeSeries& series, const BandSpec& band,
              double flank_hz = defaults::kSsdFlankHz, double gap_hz = defaults::kSsdGapHz,
              double shrinkage = defaults::kSsdShrinkage);

// Component signals w_i^T x for the first `count` filters.
TimeSeries ssd_components(const TimeSeries& series, const SsdResult& result,
                          std::size_t count = 1);

}  // namespace cogload
