#include "cogload/protocol.hpp"

#include "cogload/config.hpp"
#include "cogload/error.hpp"
#include "cogload/rng.hpp"
#include "cogload/synth.hpp"

#include <cmath>
#include <cstdio>
#include <map>

namespace cogload {

std::string PursuitCell::name() const {
  return std::string(to_string(shape)) + "-" + std::string(to_string(speed));
}

std::vector<PursuitCell> pursuit_cells() {
  std::vector<PursuitCell> cells;
  for (auto shape : {TrajectoryShape::Rectangle, TrajectoryShape::Circle, TrajectoryShape::Sine}) {
    for (auto speed : {SpeedClass::Slow, SpeedClass::Fast}) cells.push_back({shape, speed});
  }
  return cells;
}

PursuitCell parse_cell(std::string_view text) {
  const auto dash = text.rfind('-');
  if (dash == std::string_view::npos) {
    throw Error(Errc::InvalidArgument, "cell must look like 'circle-fast', got '" +
                                           std::string(text) + "'");
  }
  return {parse_shape(text.substr(0, dash)), parse_speed_class(text.substr(dash + 1))};
}

std::size_t pursuit_fold_count(const PursuitCell& cell) {
  const bool fast = cell.speed == SpeedClass::Fast;
  switch (cell.shape) {
    case TrajectoryShape::Rectangle: return fast ? 3 : 2;
    case TrajectoryShape::Circle: return fast ? 7 : 5;
    case TrajectoryShape::Sine: return fast ? 3 : 2;
  }
  return 2;
}

std::vector<PursuitTrial> gen_pursuit_cohort(const PursuitCohortSpec& spec) {
  if (spec.sigma_px.size() != spec.difficulties.size()) {
    throw Error(Errc::DimensionMismatch, "need one noise level per difficulty");
  }
  if (spec.person_spread < 0.0 || spec.person_spread >= 1.0) {
    throw Error(Errc::InvalidArgument, "person spread must lie in [0, 1)");
  }
  std::vector<PursuitTrial> trials;
  std::uint64_t trial_index = 0;
  for (const auto& cell : spec.cells) {
    const TrajectoryPath path =
        gen_trajectory(cell.shape, speed_px_s(cell.speed), spec.duration_s, spec.rate_hz);
    const int reps = spec.repetitions.value_or(static_cast<int>(pursuit_fold_count(cell)));
    for (std::size_t p = 0; p < spec.persons; ++p) {
      Rng person_rng(spec.seed, stream_id("cohort-person", p));
      const double factor = 1.0 + spec.person_spread * (2.0 * person_rng.uniform() - 1.0);
      char id[16];
      std::snprintf(id, sizeof id, "P%02zu", p + 1);
      for (std::size_t d = 0; d < spec.difficulties.size(); ++d) {
        for (int rep = 1; rep <= reps; ++rep) {
          PursuitTrial trial;
          trial.path = path;
          trial.gaze = gen_gaze(path, spec.sigma_px[d] * factor, spec.lag_ms,
                                splitmix64(spec.seed ^ stream_id("cohort-trial", trial_index++)));
          trial.person_id = id;
          trial.condition = {cell.shape, cell.speed, spec.difficulties[d]};
          trial.repetition_id = rep;
          trials.push_back(std::move(trial));
        }
      }
    }
  }
  return trials;
}

FeatureDataset dataset_from_instances(std::span<const PursuitInstance> instances) {
  FeatureDataset ds;
  if (instances.empty()) return ds;
  const auto d = instances.front().values.size();
  ds.X.resize(static_cast<Eigen::Index>(instances.size()), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto& inst = instances[i];
    if (inst.values.size() != d) {
      throw Error(Errc::DimensionMismatch, "instances differ in length");
    }
    for (std::size_t j = 0; j < d; ++j) {
      ds.X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = inst.values[j];
    }
    ds.y.push_back(inst.label);
    ds.person_ids.push_back(inst.person_id);
    ds.repetition_ids.push_back(inst.repetition_id);
    ds.conditions.push_back(inst.condition.cell());
  }
  return ds;
}

FeatureDataset binarize_workload(const FeatureDataset& ds) {
  FeatureDataset out = ds;
  for (auto& v : out.y) v = v > 0.5 ? 1.0 : 0.0;
  return out;
}

namespace {

FeatureDataset filter_rows(const FeatureDataset& ds, const std::vector<std::string>& column,
                           const std::string& value, const char* what) {
  if (column.size() != ds.size()) {
    throw Error(Errc::DimensionMismatch, std::string("dataset has no ") + what + " column");
  }
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (column[i] == value) rows.push_back(i);
  }
  return ds.subset(rows);
}

}  // namespace

FeatureDataset filter_condition(const FeatureDataset& ds, const std::string& condition) {
  return filter_rows(ds, ds.conditions, condition, "condition");
}

FeatureDataset filter_person(const FeatureDataset& ds, const std::string& person) {
  return filter_rows(ds, ds.person_ids, person, "person");
}

PersonDependentResult person_dependent_eval(const FeatureDataset& cell_ds, const PursuitCell& cell,
                                            const Trainer& trainer, std::uint64_t seed) {
  PersonDependentResult out;
  out.folds = pursuit_fold_count(cell);
  std::vector<ClassMetrics> means;
  for (const auto& person : cell_ds.persons()) {
    auto report = leave_one_repetition_out(filter_person(cell_ds, person), out.folds, trainer,
                                           seed);
    means.push_back(report.pooled);
    out.per_person.push_back(std::move(report));
  }
  out.mean = mean_metrics(means);
  return out;
}

std::vector<ConditionRow> pursuit_condition_table(const FeatureDataset& ds, const Trainer& trainer,
                                                  std::uint64_t seed) {
  std::vector<ConditionRow> rows;
  for (const auto& cell : pursuit_cells()) {
    const FeatureDataset cell_ds = filter_condition(ds, cell.name());
    if (cell_ds.size() == 0) continue;
    ConditionRow row;
    row.cell = cell;
    row.binary_independent = leave_one_person_out(binarize_workload(cell_ds), trainer).pooled;
    row.multi_independent = leave_one_person_out(cell_ds, trainer).pooled;
    const auto dep = person_dependent_eval(cell_ds, cell, trainer, seed);
    row.folds = dep.folds;
    row.multi_dependent = dep.mean;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string format_condition_table(std::span<const ConditionRow> rows) {
  std::string out =
      "condition,folds,"
      "binary_indep_accuracy,binary_indep_precision,binary_indep_recall,binary_indep_f1,"
      "multi_indep_accuracy,multi_indep_precision,multi_indep_recall,multi_indep_f1,"
      "multi_dep_accuracy,multi_dep_f1\n";
  for (const auto& r : rows) {
    const auto& b = r.binary_independent;
    const auto& m = r.multi_independent;
    const auto& p = r.multi_dependent;
    out += r.cell.name() + "," + std::to_string(r.folds);
    for (double v : {b.accuracy, b.macro_precision, b.macro_recall, b.macro_f1, m.accuracy,
                     m.macro_precision, m.macro_recall, m.macro_f1, p.accuracy, p.macro_f1}) {
      out += "," + format_double(v);
    }
    out += "\n";
  }
  return out;
}

}  // namespace cogload
