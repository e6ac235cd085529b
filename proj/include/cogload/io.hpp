#pragma once

#include "cogload/config.hpp"
#include "cogload/defaults.hpp"
#include "cogload/eeg.hpp"
#include "cogload/gaze.hpp"
#include "cogload/learn.hpp"
#include "cogload/timeseries.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace cogload {

// ---------------------------------------------------------------------------
// Recording CSV
//
//   # rate_hz=250
//   # t0_s=0
//   # channels=Fp1:uV,Fp2:uV
//   time_s,Fp1,Fp2
//   0,12.5,-3
//   ...
//
// Timestamps must sit within half a sample of t0_s + k / rate_hz. Annotations
// live in "<stem>.annotations.csv" next to the recording (header time_s,tag).

std::filesystem::path annotations_path(const std::filesystem::path& recording);

// Unit strings the loader knows; others load with a warning.
bool is_known_unit(std::string_view unit) noexcept;

TimeSeries parse_recording(std::string_view text, std::vector<std::string>* warnings = nullptr);
TimeSeries load_recording(const std::filesystem::path& path,
                          std::vector<std::string>* warnings = nullptr);

std::string format_recording(const TimeSeries& series);
std::vector<Annotation> parse_annotations(std::string_view text);
std::string format_annotations(const std::vector<Annotation>& annotations);
// Writes the recording and, when it has annotations, the companion file.
void save_recording(const std::filesystem::path& path, const TimeSeries& series);

// ---------------------------------------------------------------------------
// Files

std::string read_text(const std::filesystem::path& path);
// Writes to a temporary file in the same directory, then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Datasets and tables

// person,repetition,condition,label,f0,f1,...
std::string format_dataset(const FeatureDataset& ds);
FeatureDataset parse_dataset(std::string_view text);

// time_s,power[,normalized]
std::string format_power_course(const PowerCourse& course);
std::string format_blink_report(const BlinkReport& report);

// Static line chart; each series is drawn against its own x values.
struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};
std::string render_svg(const std::string& title, const std::string& x_label,
                       const std::string& y_label, const std::vector<PlotSeries>& series);

// ---------------------------------------------------------------------------
// Run configuration
//
// Every protocol constant has its default here, taken from defaults.hpp. The
// CLI starts from these, applies a key-value config file, then explicit flags.
struct RunConfig {
  // eeg
  double frame_window_s{defaults::kFrameWindowS};
  double frame_hop_s{defaults::kFrameHopS};
  double edge_trim_s{defaults::kEdgeTrimS};
  double prefilter_low_hz{defaults::kPrefilterLowHz};
  double prefilter_high_hz{defaults::kPrefilterHighHz};
  int filter_order{defaults::kBandpassOrder};
  double iaf_half_width_hz{defaults::kIafHalfWidthHz};
  double iaf_search_low_hz{defaults::kIafSearchLowHz};
  double iaf_search_high_hz{defaults::kIafSearchHighHz};
  double theta_center_hz{defaults::kThetaCenterHz};
  double theta_half_width_hz{defaults::kThetaHalfWidthHz};
  double ssd_flank_hz{defaults::kSsdFlankHz};
  double ssd_gap_hz{defaults::kSsdGapHz};
  double ssd_shrinkage{defaults::kSsdShrinkage};
  std::string reduction{"per-channel"};
  double blink_threshold_uv{defaults::kBlinkThresholdUv};
  double blink_refractory_s{defaults::kBlinkRefractoryS};
  // gaze
  double pursuit_drop_head_s{defaults::kPursuitDropHeadS};
  long long pursuit_smooth_window{static_cast<long long>(defaults::kPursuitSmoothWindow)};
  long long pursuit_smooth_hop{static_cast<long long>(defaults::kPursuitSmoothHop)};
  long long pursuit_instance_length{static_cast<long long>(defaults::kPursuitInstanceLength)};
  std::string normalization{"per-person"};
  double pupil_window_s{defaults::kPupilWindowS};
  // learn
  double svm_c{defaults::kSvmC};
  long long svm_epochs{defaults::kSvmEpochs};
  std::string scheme{"lopo"};
  // stream
  double stream_capacity_s{defaults::kStreamCapacityS};
  // reproducibility
  std::uint64_t seed{1};

  KeyValues to_key_values() const;
  // Keys absent from `kv` keep their current value; unknown keys throw.
  void apply(const KeyValues& kv);
};

// ---------------------------------------------------------------------------
// Manifests

struct FileDigest {
  std::string path;
  std::string sha256;
};

struct Manifest {
  std::string tool_version;
  std::string command;
  std::vector<std::string> argv;  // arguments after the program name
  std::string working_directory;
  KeyValues config;
  std::uint64_t seed{0};
  std::vector<FileDigest> inputs;
  std::vector<FileDigest> outputs;
};

FileDigest digest_of(const std::filesystem::path& path);
std::string manifest_to_json(const Manifest& manifest);
Manifest manifest_from_json(std::string_view text);

}  // namespace cogload
