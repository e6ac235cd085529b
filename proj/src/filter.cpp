#include "cogload/filter.hpp"

#include "cogload/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace cogload {

namespace {

using cplx = std::complex<double>;

// Left-half-plane poles of the normalized analog Butterworth prototype.
std::vector<cplx> prototype_poles(int order) {
  std::vector<cplx> poles;
  for (int k = 0; k < order; ++k) {
    const double theta =
        std::numbers::pi * (2.0 * k + order + 1) / (2.0 * order);
    poles.push_back(std::polar(1.0, theta));
  }
  return poles;
}

cplx bilinear(cplx s, double fs2) { return (fs2 + s) / (fs2 - s); }

double prewarp(double freq_hz, double rate_hz) {
  return 2.0 * rate_hz * std::tan(std::numbers::pi * freq_hz / rate_hz);
}

// Pairs digital poles into sections that share the numerator `num`.
// Complex poles pair with their conjugates; leftover real poles pair together.
SosFilter assemble(const std::vector<cplx>& poles, const Biquad& num) {
  SosFilter filter;
  std::vector<double> real_poles;
  for (const auto& p : poles) {
    if (std::abs(p.imag()) < 1e-12) {
      real_poles.push_back(p.real());
    } else if (p.imag() > 0.0) {
      Biquad s = num;
      s.a1 = -2.0 * p.real();
      s.a2 = std::norm(p);
      filter.sections.push_back(s);
    }
  }
  std::sort(real_poles.begin(), real_poles.end());
  for (std::size_t i = 0; i + 1 < real_poles.size(); i += 2) {
    Biquad s = num;
    s.a1 = -(real_poles[i] + real_poles[i + 1]);
    s.a2 = real_poles[i] * real_poles[i + 1];
    filter.sections.push_back(s);
  }
  if (real_poles.size() % 2 == 1) {
    Biquad s = num;
    s.a1 = -real_poles.back();
    s.a2 = 0.0;
    filter.sections.push_back(s);
  }
  return filter;
}

void scale_to_unit_gain(SosFilter& filter, double freq_hz, double rate_hz) {
  const double g = filter.gain(freq_hz, rate_hz);
  auto& s = filter.sections.front();
  s.b0 /= g;
  s.b1 /= g;
  s.b2 /= g;
}

void check_edges(double rate_hz, double low_hz, double high_hz) {
  if (!(rate_hz > 0.0)) throw Error(Errc::InvalidArgument, "rate must be positive");
  if (high_hz >= rate_hz / 2.0) {
    throw Error(Errc::NyquistViolation, "upper edge " + std::to_string(high_hz) +
                                            " Hz is not below Nyquist (" +
                                            std::to_string(rate_hz / 2.0) + " Hz)");
  }
  if (!(low_hz >= 0.0) || !(low_hz < high_hz)) {
    throw Error(Errc::InvalidArgument, "band edges must satisfy 0 <= low < high");
  }
}

}  // namespace

std::complex<double> SosFilter::response(double freq_hz, double rate_hz) const {
  const cplx z1 = std::polar(1.0, -2.0 * std::numbers::pi * freq_hz / rate_hz);
  const cplx z2 = z1 * z1;
  cplx h{1.0, 0.0};
  for (const auto& s : sections) {
    h *= (s.b0 + s.b1 * z1 + s.b2 * z2) / (1.0 + s.a1 * z1 + s.a2 * z2);
  }
  return h;
}

SosFilter butterworth_lowpass(double rate_hz, double cutoff_hz, int order) {
  check_edges(rate_hz, 0.0, cutoff_hz);
  if (order < 1) throw Error(Errc::InvalidArgument, "filter order must be >= 1");
  const double wc = prewarp(cutoff_hz, rate_hz);
  const double fs2 = 2.0 * rate_hz;
  std::vector<cplx> poles;
  for (const auto& p : prototype_poles(order)) poles.push_back(bilinear(p * wc, fs2));
  // Zeros at z = -1; a first-order leftover section only gets one of them.
  SosFilter filter = assemble(poles, Biquad{1.0, 2.0, 1.0, 0.0, 0.0});
  for (auto& s : filter.sections) {
    if (s.a2 == 0.0) {
      s.b1 = 1.0;
      s.b2 = 0.0;
    }
  }
  scale_to_unit_gain(filter, 0.0, rate_hz);
  return filter;
}

SosFilter butterworth_bandpass(double rate_hz, double low_hz, double high_hz, int order) {
  check_edges(rate_hz, low_hz, high_hz);
  if (order < 1) throw Error(Errc::InvalidArgument, "filter order must be >= 1");
  if (low_hz == 0.0) return butterworth_lowpass(rate_hz, high_hz, order);

  const double wl = prewarp(low_hz, rate_hz);
  const double wh = prewarp(high_hz, rate_hz);
  const double bw = wh - wl;
  const double w0 = std::sqrt(wl * wh);
  const double fs2 = 2.0 * rate_hz;

  std::vector<cplx> poles;
  for (const auto& p : prototype_poles(order)) {
    const cplx half = p * (bw / 2.0);
    const cplx disc = std::sqrt(half * half - w0 * w0);
    poles.push_back(bilinear(half + disc, fs2));
    poles.push_back(bilinear(half - disc, fs2));
  }
  // `order` zeros at DC and `order` at Nyquist: one of each per section.
  SosFilter filter = assemble(poles, Biquad{1.0, 0.0, -1.0, 0.0, 0.0});
  const double centre_hz = std::atan(w0 / fs2) * rate_hz / std::numbers::pi;
  scale_to_unit_gain(filter, centre_hz, rate_hz);
  return filter;
}

std::vector<double> sosfilt(const SosFilter& filter, std::span<const double> x,
                            const double* initial_level) {
  std::vector<double> y(x.begin(), x.end());
  double level = initial_level ? *initial_level : 0.0;
  for (const auto& s : filter.sections) {
    double z1 = 0.0;
    double z2 = 0.0;
    if (initial_level) {
      const double dc = (s.b0 + s.b1 + s.b2) / (1.0 + s.a1 + s.a2);
      const double out = dc * level;
      z2 = s.b2 * level - s.a2 * out;
      z1 = s.b1 * level - s.a1 * out + z2;
      level = out;
    }
    for (auto& v : y) {
      const double in = v;
      const double out = s.b0 * in + z1;
      z1 = s.b1 * in - s.a1 * out + z2;
      z2 = s.b2 * in - s.a2 * out;
      v = out;
    }
  }
  return y;
}

std::vector<double> sosfiltfilt(const SosFilter& filter, std::span<const double> x) {
  const std::size_t n = x.size();
  if (n == 0) return {};
  std::size_t pad = 3 * (2 * filter.sections.size() + 1);
  pad = std::min(pad, n - 1);

  std::vector<double> ext;
  ext.reserve(n + 2 * pad);
  for (std::size_t i = pad; i >= 1; --i) ext.push_back(2.0 * x[0] - x[i]);
  ext.insert(ext.end(), x.begin(), x.end());
  for (std::size_t i = 1; i <= pad; ++i) ext.push_back(2.0 * x[n - 1] - x[n - 1 - i]);

  double first = ext.front();
  auto forward = sosfilt(filter, ext, &first);
  std::reverse(forward.begin(), forward.end());
  double last = forward.front();
  auto backward = sosfilt(filter, forward, &last);
  std::reverse(backward.begin(), backward.end());

  return std::vector<double>(backward.begin() + static_cast<std::ptrdiff_t>(pad),
                             backward.begin() + static_cast<std::ptrdiff_t>(pad + n));
}

}  // namespace cogload
