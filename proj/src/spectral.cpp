#include "cogload/spectral.hpp"

#include "cogload/error.hpp"
#include "cogload/filter.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace cogload {

BandSpec::BandSpec(double center, double low, double high)
    : center_hz(center), low_hz(low), high_hz(high) {
  if (!(low_hz > 0.0) || !(low_hz < high_hz) || center_hz < low_hz || center_hz > high_hz) {
    throw Error(Errc::InvalidArgument, "band requires 0 < low <= centre <= high and low < high");
  }
}

std::vector<double> bandpass(std::span<const double> x, double rate_hz, double low_hz,
                             double high_hz, int order) {
  const auto filter = butterworth_bandpass(rate_hz, low_hz, high_hz, order);
  return sosfiltfilt(filter, x);
}

TimeSeries bandpass(const TimeSeries& series, double low_hz, double high_hz, int order) {
  const auto filter = butterworth_bandpass(series.rate_hz(), low_hz, high_hz, order);
  std::vector<std::vector<double>> rows;
  rows.reserve(series.channel_count());
  for (const auto& row : series.data()) rows.push_back(sosfiltfilt(filter, row));
  return TimeSeries(series.rate_hz(), series.channels(), std::move(rows), series.t0_s(),
                    series.annotations());
}

namespace {

// Real-input DFT restricted to the non-negative bins, O(N^2) with a shared
// twiddle table. Frames here are short (one second), so this stays cheap and
// works for any length, not only powers of two.
class RealDft {
 public:
  explicit RealDft(std::size_t n) : n_(n), cos_(n), sin_(n), window_(n) {
    for (std::size_t k = 0; k < n; ++k) {
      const double phase = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
      cos_[k] = std::cos(phase);
      sin_[k] = std::sin(phase);
      window_[k] = n > 1 ? 0.5 - 0.5 * std::cos(phase) : 1.0;
    }
    window_energy_ = std::inner_product(window_.begin(), window_.end(), window_.begin(), 0.0);
  }

  std::size_t bins() const noexcept { return n_ / 2 + 1; }

  void power(std::span<const double> frame, std::vector<double>& out,
             std::vector<double>& tapered) const {
    for (std::size_t k = 0; k < n_; ++k) tapered[k] = frame[k] * window_[k];
    const double norm = static_cast<double>(n_) * window_energy_;
    out.assign(bins(), 0.0);
    for (std::size_t b = 0; b < bins(); ++b) {
      double re = 0.0;
      double im = 0.0;
      std::size_t idx = 0;
      for (std::size_t k = 0; k < n_; ++k) {
        re += tapered[k] * cos_[idx];
        im -= tapered[k] * sin_[idx];
        idx += b;
        if (idx >= n_) idx -= n_;
      }
      const bool edge = b == 0 || (n_ % 2 == 0 && b == n_ / 2);
      out[b] = (edge ? 1.0 : 2.0) * (re * re + im * im) / norm;
    }
  }

 private:
  std::size_t n_;
  std::vector<double> cos_, sin_, window_;
  double window_energy_{0.0};
};

}  // namespace

Spectrogram stft_power(std::span<const double> x, double rate_hz, const WindowPlan& plan,
                       double t0_s) {
  if (plan.window_len == 0 || plan.hop_len == 0) {
    throw Error(Errc::ZeroLengthWindow, "window plan has zero-length window or hop");
  }
  if (x.size() < plan.window_len) {
    throw Error(Errc::TooShort, "signal of " + std::to_string(x.size()) +
                                    " samples is shorter than one window (" +
                                    std::to_string(plan.window_len) + ")");
  }
  Spectrogram spec;
  spec.rate_hz = rate_hz;
  spec.t0_s = t0_s;
  spec.plan = plan;
  spec.plan.frame_count = (x.size() - plan.window_len) / plan.hop_len + 1;

  const RealDft dft(plan.window_len);
  spec.freqs_hz.resize(dft.bins());
  for (std::size_t b = 0; b < dft.bins(); ++b) {
    spec.freqs_hz[b] = static_cast<double>(b) * rate_hz / static_cast<double>(plan.window_len);
  }
  spec.frames.resize(spec.plan.frame_count);
  std::vector<double> scratch(plan.window_len);
  for (std::size_t f = 0; f < spec.plan.frame_count; ++f) {
    dft.power(x.subspan(spec.plan.frame_start(f), plan.window_len), spec.frames[f], scratch);
  }
  return spec;
}

Spectrogram stft_power(const TimeSeries& series, const WindowPlan& plan) {
  if (series.channel_count() != 1) {
    throw Error(Errc::InvalidArgument, "stft_power expects a single-channel series");
  }
  return stft_power(series.row(0), series.rate_hz(), plan, series.t0_s());
}

std::vector<double> band_power(const Spectrogram& spec, const BandSpec& band) {
  std::vector<std::size_t> bins;
  for (std::size_t b = 0; b < spec.bin_count(); ++b) {
    if (band.contains(spec.freqs_hz[b])) bins.push_back(b);
  }
  if (bins.empty()) {
    throw Error(Errc::BandOutOfRange, "no spectral bin within " + std::to_string(band.low_hz) +
                                          "-" + std::to_string(band.high_hz) + " Hz");
  }
  std::vector<double> out(spec.frames.size(), 0.0);
  for (std::size_t f = 0; f < spec.frames.size(); ++f) {
    double sum = 0.0;
    for (auto b : bins) sum += spec.frames[f][b];
    out[f] = sum / static_cast<double>(bins.size());
  }
  return out;
}

std::vector<double> mean_spectrum(const Spectrogram& spec) {
  std::vector<double> mean(spec.bin_count(), 0.0);
  if (spec.frames.empty()) return mean;
  for (const auto& frame : spec.frames) {
    for (std::size_t b = 0; b < mean.size(); ++b) mean[b] += frame[b];
  }
  for (auto& v : mean) v /= static_cast<double>(spec.frames.size());
  return mean;
}

BandSpec detect_iaf(const TimeSeries& eyes_open, const TimeSeries& eyes_closed,
                    const BandSpec& search, double half_width_hz, double window_s,
                    double hop_s) {
  if (eyes_open.channel_count() != 1 || eyes_closed.channel_count() != 1) {
    throw Error(Errc::InvalidArgument, "IAF detection expects single-channel recordings");
  }
  if (eyes_open.rate_hz() != eyes_closed.rate_hz()) {
    throw Error(Errc::InvalidArgument, "eyes-open and eyes-closed rates differ");
  }
  if (eyes_open.duration_s() < 2.0 || eyes_closed.duration_s() < 2.0) {
    throw Error(Errc::TooShort, "IAF detection needs at least 2 s per condition");
  }
  const auto open_spec = stft_power(eyes_open, make_window_plan(eyes_open, window_s, hop_s));
  const auto closed_spec =
      stft_power(eyes_closed, make_window_plan(eyes_closed, window_s, hop_s));
  const auto open_mean = mean_spectrum(open_spec);
  const auto closed_mean = mean_spectrum(closed_spec);

  std::size_t best = open_spec.bin_count();
  double best_diff = 0.0;
  for (std::size_t b = 0; b < open_spec.bin_count(); ++b) {
    if (!search.contains(open_spec.freqs_hz[b])) continue;
    const double diff = closed_mean[b] - open_mean[b];
    if (best == open_spec.bin_count() || diff > best_diff) {
      best = b;
      best_diff = diff;
    }
  }
  if (best == open_spec.bin_count()) {
    throw Error(Errc::BandOutOfRange, "IAF search band contains no spectral bin");
  }
  if (!(best_diff > 0.0)) {
    throw Error(Errc::NoAlphaPeak,
                "eyes-closed power never exceeds eyes-open power within the search band");
  }
  const double peak = open_spec.freqs_hz[best];
  return BandSpec::around(peak, half_width_hz);
}

namespace {

Eigen::MatrixXd covariance(const std::vector<std::vector<double>>& rows) {
  const auto c = static_cast<Eigen::Index>(rows.size());
  const auto n = static_cast<Eigen::Index>(rows.front().size());
  Eigen::MatrixXd x(c, n);
  for (Eigen::Index i = 0; i < c; ++i) {
    x.row(i) = Eigen::Map<const Eigen::RowVectorXd>(rows[static_cast<std::size_t>(i)].data(), n);
  }
  x.colwise() -= x.rowwise().mean();
  return (x * x.transpose()) / static_cast<double>(n);
}

std::vector<std::vector<double>> filter_rows(const TimeSeries& series, double low, double high) {
  const auto filter = butterworth_bandpass(series.rate_hz(), low, high, defaults::kBandpassOrder);
  std::vector<std::vector<double>> rows;
  for (const auto& row : series.data()) rows.push_back(sosfiltfilt(filter, row));
  return rows;
}

}  // namespace

SsdResult ssd(const TimeSeries& series, const BandSpec& band, double flank_hz, double gap_hz,
              double shrinkage) {
  const auto channels = static_cast<Eigen::Index>(series.channel_count());
  if (channels < 1) throw Error(Errc::InvalidArgument, "SSD needs at least one channel");
  if (series.sample_count() < 2) throw Error(Errc::TooShort, "SSD needs at least two samples");
  if (!(flank_hz > 0.0) || gap_hz < 0.0) {
    throw Error(Errc::InvalidArgument, "flank width must be positive and gap non-negative");
  }
  if (shrinkage < 0.0 || shrinkage >= 1.0) {
    throw Error(Errc::InvalidArgument, "shrinkage must lie in [0, 1)");
  }
  const double nyquist = series.rate_hz() / 2.0;
  const double upper_lo = band.high_hz + gap_hz;
  const double upper_hi = upper_lo + flank_hz;
  if (upper_hi >= nyquist) {
    throw Error(Errc::NyquistViolation, "upper flank reaches " + std::to_string(upper_hi) +
                                            " Hz, Nyquist is " + std::to_string(nyquist) + " Hz");
  }
  const double lower_hi = band.low_hz - gap_hz;
  const double lower_lo = std::max(0.0, lower_hi - flank_hz);

  const Eigen::MatrixXd signal = covariance(filter_rows(series, band.low_hz, band.high_hz));
  Eigen::MatrixXd noise = covariance(filter_rows(series, upper_lo, upper_hi));
  if (lower_hi > 0.0) noise += covariance(filter_rows(series, lower_lo, lower_hi));

  const double scale = noise.trace() / static_cast<double>(channels);
  noise = (1.0 - shrinkage) * noise +
          shrinkage * scale * Eigen::MatrixXd::Identity(channels, channels);

  Eigen::LLT<Eigen::MatrixXd> llt(noise);
  if (llt.info() != Eigen::Success || !(noise.diagonal().minCoeff() > 0.0)) {
    throw Error(Errc::SingularNoise, "regularized flank covariance is not positive definite");
  }

  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(signal, noise);
  if (solver.info() != Eigen::Success) {
    throw Error(Errc::SingularNoise, "generalized eigen-solver failed");
  }

  SsdResult result;
  result.signal_cov = signal;
  result.noise_cov = noise;
  result.filters.resize(channels, channels);
  for (Eigen::Index i = 0; i < channels; ++i) {
    // Eigen returns ascending eigenvalues with B-normalized eigenvectors.
    const Eigen::Index src = channels - 1 - i;
    Eigen::VectorXd w = solver.eigenvectors().col(src);
    Eigen::Index arg = 0;
    w.cwiseAbs().maxCoeff(&arg);
    if (w(arg) < 0.0) w = -w;
    result.filters.row(i) = w.transpose();
    result.eigenvalues.push_back(solver.eigenvalues()(src));
  }
  // Activation patterns A = S W (W^T S W)^-1.
  const Eigen::MatrixXd w = result.filters.transpose();
  const Eigen::MatrixXd sw = signal * w;
  result.patterns = sw * (w.transpose() * sw).completeOrthogonalDecomposition().pseudoInverse();
  return result;
}

TimeSeries ssd_components(const TimeSeries& series, const SsdResult& result, std::size_t count) {
  const auto channels = static_cast<Eigen::Index>(series.channel_count());
  if (result.filters.cols() != channels) {
    throw Error(Errc::DimensionMismatch, "SSD filters do not match the series channel count");
  }
  count = std::min<std::size_t>(count, static_cast<std::size_t>(result.filters.rows()));
  const std::size_t n = series.sample_count();
  std::vector<Channel> labels;
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<double> out(n, 0.0);
    for (Eigen::Index c = 0; c < channels; ++c) {
      const double w = result.filters(static_cast<Eigen::Index>(i), c);
      const auto& row = series.data()[static_cast<std::size_t>(c)];
      for (std::size_t k = 0; k < n; ++k) out[k] += w * row[k];
    }
    labels.push_back(Channel{"ssd" + std::to_string(i + 1), ""});
    rows.push_back(std::move(out));
  }
  return TimeSeries(series.rate_hz(), std::move(labels), std::move(rows), series.t0_s(),
                    series.annotations());
}

}  // namespace cogload
