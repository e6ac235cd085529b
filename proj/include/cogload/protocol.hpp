#pragma once

#include "cogload/gaze.hpp"
#include "cogload/learn.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cogload {

// Smooth-pursuit study layout: 3 trajectories x 2 speeds, N-back difficulty
// 0..3 per cell, repetitions per cell fixed by how often the animation loops.

struct PursuitCell {
  TrajectoryShape shape{TrajectoryShape::Circle};
  SpeedClass speed{SpeedClass::Slow};

  std::string name() const;  // "circle-fast"
  bool operator==(const PursuitCell&) const = default;
};

// Rectangle, circle, sine; slow before fast.
std::vector<PursuitCell> pursuit_cells();
PursuitCell parse_cell(std::string_view text);

// Folds of the per-person leave-one-repetition-out evaluation:
// rectangle 2/3, circle 5/7, sine 2/3 (slow/fast).
std::size_t pursuit_fold_count(const PursuitCell& cell);

struct PursuitCohortSpec {
  std::size_t persons{10};
  std::vector<PursuitCell> cells = pursuit_cells();
  std::vector<int> difficulties{0, 1, 2, 3};
  // Gaze noise per entry of `difficulties`.
  std::vector<double> sigma_px{2.0, 6.0, 12.0, 20.0};
  // Repetitions per cell; unset uses the fold count of the cell.
  std::optional<int> repetitions;
  // Each person's noise is scaled by a factor drawn from [1 - s, 1 + s].
  double person_spread{0.1};
  // Long enough for the dropped head plus a full smoothed instance.
  double duration_s{27.0};
  double rate_hz{defaults::kGazeRateHz};
  double lag_ms{0.0};
  std::uint64_t seed{1};
};

// Person ids are "P01", "P02", ...
std::vector<PursuitTrial> gen_pursuit_cohort(const PursuitCohortSpec& spec);

// Rows in instance order; condition is the cell name.
FeatureDataset dataset_from_instances(std::span<const PursuitInstance> instances);

// 0-back -> 0 (low workload), any N-back task -> 1 (high workload).
FeatureDataset binarize_workload(const FeatureDataset& ds);

FeatureDataset filter_condition(const FeatureDataset& ds, const std::string& condition);
FeatureDataset filter_person(const FeatureDataset& ds, const std::string& person);

// Person-dependent evaluation of one cell: leave-one-repetition-out per person
// with the cell's fold count, metrics averaged per person and then over
// persons.
struct PersonDependentResult {
  std::size_t folds{0};
  std::vector<EvalReport> per_person;
  ClassMetrics mean;
};
PersonDependentResult person_dependent_eval(const FeatureDataset& cell_ds, const PursuitCell& cell,
                                            const Trainer& trainer, std::uint64_t seed);

// One row per cell: person-independent binary and multi-label
// leave-one-person-out, plus person-dependent multi-label.
struct ConditionRow {
  PursuitCell cell;
  std::size_t folds{0};
  ClassMetrics binary_independent;
  ClassMetrics multi_independent;
  ClassMetrics multi_dependent;
};

std::vector<ConditionRow> pursuit_condition_table(const FeatureDataset& ds, const Trainer& trainer,
                                                  std::uint64_t seed);

// CSV with one line per row.
std::string format_condition_table(std::span<const ConditionRow> rows);

}  // namespace cogload
