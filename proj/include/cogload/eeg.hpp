#pragma once

#include "cogload/defaults.hpp"
#include "cogload/spectral.hpp"
#include "cogload/timeseries.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cogload {

struct PowerCourse {
  std::vector<double> values;        // per-frame band power, or dimensionless if normalized
  std::vector<double> frame_times_s; // window centres
  BandSpec band;
  bool normalized{false};

  std::size_t size() const noexcept { return values.size(); }
  double mean() const;
};

struct BlinkReport {
  std::size_t count{0};
  double per_minute{0.0};
  std::vector<double> blink_times_s;
  double duration_s{0.0};
};

// Where electrodes are averaged.
//   PerChannel: band power per electrode, then the per-frame mean (default).
//   SignalMean: element-wise mean of the raw channels, then one spectrum.
enum class ElectrodeReduction { PerChannel, SignalMean };

std::string_view to_string(ElectrodeReduction mode) noexcept;
ElectrodeReduction parse_reduction(std::string_view text);

struct CourseOptions {
  ElectrodeReduction reduction{ElectrodeReduction::PerChannel};
  double prefilter_low_hz{defaults::kPrefilterLowHz};
  double prefilter_high_hz{defaults::kPrefilterHighHz};
  int filter_order{defaults::kBandpassOrder};
  double window_s{defaults::kFrameWindowS};
  double hop_s{defaults::kFrameHopS};
  // Seconds dropped from both ends after filtering; unset leaves the series as
  // given (callers that trimmed already).
  std::optional<double> trim_edge_s;
};

// select -> bandpass(0.5, 20) -> stft -> band power in `iaf` -> mean over
// electrodes. Per-electrode courses are summed in label order so the result
// does not depend on how the electrodes were listed.
PowerCourse iaf_course(const TimeSeries& series, const BandSpec& iaf,
                       std::span<const std::string> electrodes, const CourseOptions& options = {});

// Same chain in the 5 +- 2 Hz band. With two or more electrodes the input is
// first reduced to the leading SSD component of the band.
PowerCourse theta_course(const TimeSeries& series, std::span<const std::string> electrodes,
                         const CourseOptions& options = {});

// Both courses divided by mean(baseline). Throws ZeroBaseline when that mean
// is not positive.
PowerCourse normalize_course(const PowerCourse& course, const PowerCourse& baseline);

struct RatioCourse {
  std::vector<double> values;
  std::vector<double> frame_times_s;
};

// ratio[f] = theta[f] / alpha[f]; ZeroAlphaFrame names the first zero frame.
RatioCourse theta_alpha_ratio(const PowerCourse& theta, const PowerCourse& alpha);

// A blink starts where mean(|Fp1|, |Fp2|) rises to the threshold; crossings
// within refractory_s of the last counted blink belong to it.
BlinkReport count_blinks(const TimeSeries& series,
                         double threshold_uv = defaults::kBlinkThresholdUv,
                         double refractory_s = defaults::kBlinkRefractoryS);

// Electrode lists as owned strings.
std::vector<std::string> occipital_electrodes();
std::vector<std::string> frontal_electrodes();

}  // namespace cogload
