#include "cogload/eeg.hpp"
#include "cogload/error.hpp"
#include "cogload/spectral.hpp"
#include "cogload/synth.hpp"

#include "doctest.h"

#include <cmath>
#include <numeric>

using namespace cogload;

namespace {

TimeSeries blink_fixture(double duration_s, const std::vector<double>& spike_times,
                         double amp = 300.0, double width_s = 0.1) {
  const double rate = 250.0;
  const auto n = static_cast<std::size_t>(duration_s * rate);
  std::vector<double> fp(n, 0.0);
  for (double t : spike_times) {
    const auto a = static_cast<std::size_t>(std::lround(t * rate));
    const auto b = std::min(n, a + static_cast<std::size_t>(std::lround(width_s * rate)));
    for (std::size_t k = a; k < b; ++k) fp[k] = amp;
  }
  return TimeSeries(rate, {{"Fp1", "uV"}, {"Fp2", "uV"}}, {fp, fp});
}

double correlation(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

PowerCourse constant_course(double v, std::size_t n = 10) {
  PowerCourse c;
  c.values.assign(n, v);
  for (std::size_t i = 0; i < n; ++i) c.frame_times_s.push_back(0.5 + 0.5 * static_cast<double>(i));
  c.band = BandSpec::range(8.0, 12.0);
  return c;
}

}  // namespace

TEST_SUITE("eeg-pipeline") {
  TEST_CASE("alpha burst raises the course") {
    SynthSpec s;
    s.duration_s = 30.0;
    s.channels = {{"O1", "uV"}, {"Oz", "uV"}, {"O2", "uV"}};
    s.noise_sigma = 1.0;
    s.seed = 8;
    EegComponent burst;
    burst.freq_hz = 10.0;
    burst.amplitude = 4.0;
    burst.envelope = Envelope::window(10.0, 20.0);
    s.components.push_back(burst);
    const auto series = gen_eeg(s);
    const std::vector<std::string> el{"O1", "Oz", "O2"};
    const auto course = iaf_course(series, BandSpec::range(8.0, 12.0), el);
    double in = 0.0, out = 0.0;
    std::size_t nin = 0, nout = 0;
    for (std::size_t f = 0; f < course.size(); ++f) {
      const double t = course.frame_times_s[f];
      if (t > 11.0 && t < 19.0) {
        in += course.values[f];
        ++nin;
      } else if (t < 9.0 || t > 21.0) {
        out += course.values[f];
        ++nout;
      }
    }
    CHECK(in / static_cast<double>(nin) >= 5.0 * out / static_cast<double>(nout));
  }

  TEST_CASE("single-electrode course equals the direct spectral chain") {
    SynthSpec s;
    s.duration_s = 10.0;
    s.channels = {{"Oz", "uV"}, {"Pz", "uV"}};
    s.noise_sigma = 2.0;
    s.components.push_back({9.0, 1.0, {}, Envelope::constant(1.0), {}, {}});
    const auto series = gen_eeg(s);
    const auto band = BandSpec::range(8.0, 12.0);
    const std::vector<std::string> el{"Oz"};
    const auto course = iaf_course(series, band, el);
    const auto oz = select_channels(series, {"Oz"});
    const auto filtered = bandpass(oz, 0.5, 20.0);
    const auto direct = band_power(stft_power(filtered, make_window_plan(filtered, 1.0, 0.5)), band);
    REQUIRE(course.values.size() == direct.size());
    for (std::size_t i = 0; i < direct.size(); ++i) CHECK(course.values[i] == direct[i]);

    const TimeSeries zero(250.0, {{"Oz", "uV"}}, {std::vector<double>(2500, 0.0)});
    for (double v : iaf_course(zero, band, el).values) CHECK(v == 0.0);
  }

  TEST_CASE("electrode order does not change the course") {
    SynthSpec s;
    s.duration_s = 8.0;
    s.channels = {{"O1", "uV"}, {"O2", "uV"}};
    s.noise_sigma = 1.0;
    const auto series = gen_eeg(s);
    const std::vector<std::string> a{"O1", "O2"}, b{"O2", "O1"};
    CHECK(iaf_course(series, BandSpec::range(8, 12), a).values ==
          iaf_course(series, BandSpec::range(8, 12), b).values);
    const std::vector<std::string> dup{"O1", "O1"};
    CHECK_THROWS_AS(iaf_course(series, BandSpec::range(8, 12), dup), Error);
  }

  TEST_CASE("theta course tracks the source envelope") {
    SynthSpec s;
    s.duration_s = 40.0;
    s.seed = 13;
    s.channels = {{"Fz", "uV"}, {"F3", "uV"}, {"F4", "uV"}, {"FCz", "uV"}};
    s.noise_sigma = 1.0;
    EegComponent theta;
    theta.freq_hz = 5.0;
    theta.amplitude = 3.0;
    theta.mixing = {1.0, 0.6, 0.6, 0.8};
    theta.envelope = Envelope::ramp(5.0, 35.0, 0.0, 1.0);
    s.components.push_back(theta);
    const auto series = gen_eeg(s);
    const auto course = theta_course(series, series.labels());
    std::vector<double> env2;
    for (double t : course.frame_times_s) {
      const double e = theta.envelope(t);
      env2.push_back(e * e);
    }
    CHECK(correlation(course.values, env2) >= 0.9);

    const TimeSeries zero(250.0, s.channels, std::vector<std::vector<double>>(4, std::vector<double>(5000, 0.0)));
    for (double v : theta_course(zero, zero.labels()).values) CHECK(v == 0.0);
  }

  TEST_CASE("baseline normalization") {
    const auto c = constant_course(4.0);
    const auto self = normalize_course(c, c);
    double mean = 0.0;
    for (double v : self.values) mean += v;
    CHECK(mean / 10.0 == 1.0);
    CHECK(self.normalized);
    for (double v : normalize_course(c, constant_course(2.0)).values) CHECK(v == 2.0);

    PowerCourse user1 = constant_course(1.0), user2 = constant_course(10.0);
    for (std::size_t i = 0; i < 10; ++i) {
      user1.values[i] = 1.0 + 0.1 * static_cast<double>(i);
      user2.values[i] = 10.0 * user1.values[i];
    }
    const auto n1 = normalize_course(user1, constant_course(1.0));
    const auto n2 = normalize_course(user2, constant_course(10.0));
    for (std::size_t i = 0; i < 10; ++i) CHECK(std::abs(n1.values[i] - n2.values[i]) < 1e-9);

    try {
      normalize_course(c, constant_course(0.0));
      FAIL("expected ZeroBaseline");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::ZeroBaseline);
    }
  }

  TEST_CASE("theta-alpha ratio") {
    const auto a = constant_course(2.0);
    for (double v : theta_alpha_ratio(a, a).values) CHECK(v == 1.0);
    CHECK(theta_alpha_ratio(constant_course(4.0), a).values == std::vector<double>(10, 2.0));

    PowerCourse theta = constant_course(1.0), alpha = constant_course(1.0);
    for (std::size_t i = 0; i < 10; ++i) {
      theta.values[i] = 1.0 + 0.2 * static_cast<double>(i);
      alpha.values[i] = 3.0 - 0.2 * static_cast<double>(i);
    }
    const auto r = theta_alpha_ratio(theta, alpha).values;
    for (std::size_t i = 1; i < r.size(); ++i) CHECK(r[i] > r[i - 1]);

    auto bad = constant_course(1.0);
    bad.values[3] = 0.0;
    try {
      theta_alpha_ratio(a, bad);
      FAIL("expected ZeroAlphaFrame");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::ZeroAlphaFrame);
    }
    CHECK_THROWS_AS(theta_alpha_ratio(a, constant_course(1.0, 9)), Error);
  }

  TEST_CASE("blink counting") {
    CHECK(count_blinks(blink_fixture(30.0, {})).count == 0);
    const auto five = count_blinks(blink_fixture(30.0, {2, 4, 6, 8, 10}));
    CHECK(five.count == 5);
    CHECK(five.per_minute == 5.0 * 60.0 / 30.0);
    CHECK(count_blinks(blink_fixture(10.0, {2.0, 2.15}, 300.0, 0.02)).count == 1);
    const TimeSeries fp1_only(250.0, {{"Fp1", "uV"}}, {std::vector<double>(100, 0.0)});
    try {
      count_blinks(fp1_only);
      FAIL("expected MissingChannel");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::MissingChannel);
    }
  }

  TEST_CASE("electrode groups") {
    CHECK(occipital_electrodes().size() == 8);
    CHECK(frontal_electrodes().size() == 7);
  }
}
