#pragma once

#include "cogload/defaults.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cogload {

// Instances x attributes with per-instance grouping metadata. For
// classification y holds integer class ids; for regression, real targets.
struct FeatureDataset {
  Eigen::MatrixXd X;
  std::vector<double> y;
  std::vector<std::string> person_ids;
  std::vector<int> repetition_ids;
  std::vector<std::string> conditions;

  std::size_t size() const noexcept { return y.size(); }
  std::size_t dims() const noexcept { return static_cast<std::size_t>(X.cols()); }

  // Throws DimensionMismatch unless every per-instance field has size() rows.
  // Empty metadata vectors are allowed and mean "not recorded".
  void validate() const;
  FeatureDataset subset(const std::vector<std::size_t>& rows) const;
  // Distinct class ids in ascending order.
  std::vector<int> classes() const;
  std::vector<std::string> persons() const;  // sorted, distinct
};

enum class ModelKind { SvmBinary, SvmOneVsRest, Regression };
std::string_view to_string(ModelKind kind) noexcept;

struct SvmParams {
  double C{defaults::kSvmC};
  int epochs{defaults::kSvmEpochs};
  std::uint64_t seed{1};
  bool standardize{true};
};

struct RegressionDiagnostics {
  double slope{0.0};
  double intercept{0.0};
  double r{0.0};  // Pearson correlation
  double r2{0.0};
  double rmse{0.0};
  double f{0.0};  // (SS_reg / 1) / (SS_res / (n - 2))
  std::size_t n{0};
};

// Scores live in standardized attribute space: z = (x - mean) / scale.
// Binary models hold one weight row scoring the larger class id positive;
// one-vs-rest models hold one row per class.
struct LinearModel {
  ModelKind kind{ModelKind::SvmBinary};
  std::vector<int> classes;
  std::vector<std::vector<double>> weights;
  std::vector<double> biases;
  std::vector<double> means;
  std::vector<double> scales;
  SvmParams params;
  std::optional<RegressionDiagnostics> regression;

  std::size_t dims() const noexcept { return means.size(); }
  bool operator==(const LinearModel&) const;
};

// Pegasos-style stochastic subgradient descent on
//   lambda/2 |w|^2 + 1/n sum_i max(0, 1 - y_i (w . z_i + b)),  lambda = 1 / (C n)
// with the bias carried as a constant-1 attribute. Each epoch visits the
// instances in an Rng-shuffled order, so a fixed seed gives a bit-identical
// model. When n <= dims the same iterates are computed through the Gram
// matrix.
LinearModel train_linear_svm(const FeatureDataset& ds, const SvmParams& params = {});

// Forces the primal or Gram path; exposed so the two can be compared.
enum class SvmSolver { Auto, Primal, Gram };
LinearModel train_linear_svm(const FeatureDataset& ds, const SvmParams& params, SvmSolver solver);

// Per-class decision values (one entry for binary models).
std::vector<double> decision_scores(const LinearModel& model, std::span<const double> x);

// Binary: larger class if score >= 0 (ties go positive). One-vs-rest: argmax,
// ties to the lower class id. Regression: slope * x + intercept.
double predict(const LinearModel& model, std::span<const double> x);
std::vector<double> predict(const LinearModel& model, const Eigen::MatrixXd& X);

using Trainer = std::function<LinearModel(const FeatureDataset&)>;
Trainer svm_trainer(const SvmParams& params = {});

struct ClassMetrics {
  double accuracy{0.0};
  double macro_precision{0.0};
  double macro_recall{0.0};
  double macro_f1{0.0};
  std::vector<double> precision;
  std::vector<double> recall;
  std::vector<double> f1;
  // Set when some class never occurs in the truth or is never predicted; its
  // undefined ratios count as 0.
  bool undefined_class{false};
};

using Confusion = std::vector<std::vector<std::size_t>>;  // [truth][predicted]

ClassMetrics classification_metrics(const Confusion& confusion);

// Element-wise mean of several metric sets over the same classes.
ClassMetrics mean_metrics(std::span<const ClassMetrics> metrics);

enum class EvalScheme { LopoClassify, LoroClassify, LopoRegress, Holdout };
std::string_view to_string(EvalScheme scheme) noexcept;
EvalScheme parse_scheme(std::string_view text);

struct FoldResult {
  std::string name;  // held-out person, or "rep:<ids>"
  std::size_t train_count{0};
  std::size_t test_count{0};
  double accuracy{0.0};  // classification folds
  double rmse{0.0};      // regression folds
};

struct EvalReport {
  EvalScheme scheme{EvalScheme::LopoClassify};
  std::vector<int> classes;
  Confusion confusion;
  ClassMetrics pooled;        // headline: over all held-out predictions
  ClassMetrics fold_average;  // mean of the per-fold metrics
  std::vector<FoldResult> folds;
  std::optional<std::uint64_t> seed;
  // regression
  double rmse{0.0};
  double r2{0.0};
  std::vector<double> truth;
  std::vector<double> predicted;
};

// One fold per person; each fold trains on everybody else and tests on the
// held-out person.
EvalReport leave_one_person_out(const FeatureDataset& ds, const Trainer& trainer);

// k folds over repetition ids for data of one person and condition. With
// exactly k distinct repetitions each is a fold; with more, repetitions are
// dealt into k folds after a seeded shuffle.
EvalReport leave_one_repetition_out(const FeatureDataset& ds, std::size_t k,
                                    const Trainer& trainer, std::uint64_t seed);

// Ordinary least squares of y on a single predictor.
LinearModel fit_linear_regression(std::span<const double> x, std::span<const double> y);

// Column 0 of X is the predictor. Each fold fits on all other persons' points
// and predicts the held-out person's; RMSE and R^2 are pooled.
EvalReport lopo_regression(const FeatureDataset& ds);

// Lossless JSON round trip (non-finite values are written as strings).
std::string model_to_json(const LinearModel& model);
LinearModel model_from_json(std::string_view text);
std::string report_to_json(const EvalReport& report);

}  // namespace cogload
