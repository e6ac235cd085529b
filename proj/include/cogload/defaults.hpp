#pragma once

#include <array>
#include <string_view>

// Protocol constants used as defaults throughout the toolkit.
//
// This header is the single place these values are written down. Pipeline
// functions take them as default arguments and RunConfig (io.hpp) initializes
// its fields from them, so a config file or CLI flag can override any of them.
namespace cogload::defaults {

// EEG spectral chain
inline constexpr double kFrameWindowS = 1.0;
inline constexpr double kFrameHopS = 0.5;
inline constexpr double kEdgeTrimS = 4.0;
inline constexpr double kPrefilterLowHz = 0.5;
inline constexpr double kPrefilterHighHz = 20.0;
inline constexpr int kBandpassOrder = 4;

// Individual alpha band: peak +- kIafHalfWidthHz, searched in [low, high].
inline constexpr double kIafHalfWidthHz = 2.0;
inline constexpr double kIafSearchLowHz = 6.0;
inline constexpr double kIafSearchHighHz = 14.0;

// Frontal theta band 5 +- 2 Hz.
inline constexpr double kThetaCenterHz = 5.0;
inline constexpr double kThetaHalfWidthHz = 2.0;

// Spatio-spectral decomposition flanks.
inline constexpr double kSsdFlankHz = 2.0;
inline constexpr double kSsdGapHz = 1.0;
inline constexpr double kSsdShrinkage = 0.05;

// Blink detection on Fp1/Fp2.
inline constexpr double kBlinkThresholdUv = 200.0;
inline constexpr double kBlinkRefractoryS = 0.2;

// Smooth pursuit features.
inline constexpr double kPursuitDropHeadS = 2.0;
inline constexpr std::size_t kPursuitSmoothWindow = 250;
inline constexpr std::size_t kPursuitSmoothHop = 1;
inline constexpr std::size_t kPursuitInstanceLength = 6000;
inline constexpr double kGazeRateHz = 250.0;
inline constexpr double kSlowSpeedPxS = 450.0;
inline constexpr double kFastSpeedPxS = 650.0;
inline constexpr double kDotDiameterPx = 10.0;

// Pupil decisions.
inline constexpr double kPupilWindowS = 5.0;

// N-back timing.
inline constexpr double kNBackDisplayS = 1.0;
inline constexpr double kNBackBlankS = 2.5;

// Linear SVM.
inline constexpr double kSvmC = 1.0;
inline constexpr int kSvmEpochs = 200;

// Streaming.
inline constexpr double kStreamCapacityS = 60.0;

// Electrode groups.
inline constexpr std::array<std::string_view, 8> kOccipitalElectrodes = {
    "Pz", "P3", "P7", "O1", "Oz", "O2", "P4", "P8"};
inline constexpr std::array<std::string_view, 7> kFrontalElectrodes = {
    "Fp1", "Fp2", "F7", "F3", "Fz", "F4", "F8"};

}  // namespace cogload::defaults
