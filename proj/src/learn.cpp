#include "cogload/learn.hpp"

#include "cogload/config.hpp"
#include "cogload/error.hpp"
#include "cogload/rng.hpp"

#include "json.hpp"

#include <algorithm>
#include <cstring>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>

namespace cogload {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Dataset

void FeatureDataset::validate() const {
  const auto n = size();
  auto check = [n](std::size_t got, const char* what) {
    if (got != 0 && got != n) {
      throw Error(Errc::DimensionMismatch, std::string(what) + " has " + std::to_string(got) +
                                               " entries for " + std::to_string(n) + " instances");
    }
  };
  if (static_cast<std::size_t>(X.rows()) != n) {
    throw Error(Errc::DimensionMismatch, "X has " + std::to_string(X.rows()) + " rows for " +
                                             std::to_string(n) + " labels");
  }
  check(person_ids.size(), "person_ids");
  check(repetition_ids.size(), "repetition_ids");
  check(conditions.size(), "conditions");
}

FeatureDataset FeatureDataset::subset(const std::vector<std::size_t>& rows) const {
  FeatureDataset out;
  out.X.resize(static_cast<Eigen::Index>(rows.size()), X.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.X.row(static_cast<Eigen::Index>(i)) = X.row(static_cast<Eigen::Index>(rows[i]));
    out.y.push_back(y[rows[i]]);
    if (!person_ids.empty()) out.person_ids.push_back(person_ids[rows[i]]);
    if (!repetition_ids.empty()) out.repetition_ids.push_back(repetition_ids[rows[i]]);
    if (!conditions.empty()) out.conditions.push_back(conditions[rows[i]]);
  }
  return out;
}

std::vector<int> FeatureDataset::classes() const {
  std::set<int> seen;
  for (double v : y) seen.insert(static_cast<int>(std::lround(v)));
  return {seen.begin(), seen.end()};
}

std::vector<std::string> FeatureDataset::persons() const {
  std::set<std::string> seen(person_ids.begin(), person_ids.end());
  return {seen.begin(), seen.end()};
}

std::string_view to_string(ModelKind kind) noexcept {
  switch (kind) {
    case ModelKind::SvmBinary: return "svm-binary";
    case ModelKind::SvmOneVsRest: return "svm-one-vs-rest";
    case ModelKind::Regression: return "regression";
  }
  return "?";
}

namespace {

ModelKind parse_model_kind(std::string_view text) {
  if (text == "svm-binary") return ModelKind::SvmBinary;
  if (text == "svm-one-vs-rest") return ModelKind::SvmOneVsRest;
  if (text == "regression") return ModelKind::Regression;
  throw Error(Errc::ParseError, "unknown model kind '" + std::string(text) + "'");
}

bool same_bits(double a, double b) {
  return std::memcmp(&a, &b, sizeof a) == 0 || (std::isnan(a) && std::isnan(b));
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!same_bits(a[i], b[i])) return false;
  }
  return true;
}

}  // namespace

bool LinearModel::operator==(const LinearModel& o) const {
  if (kind != o.kind || classes != o.classes || weights.size() != o.weights.size()) return false;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (!same_bits(weights[k], o.weights[k])) return false;
  }
  if (!same_bits(biases, o.biases) || !same_bits(means, o.means) || !same_bits(scales, o.scales)) {
    return false;
  }
  if (!same_bits(params.C, o.params.C) || params.epochs != o.params.epochs ||
      params.seed != o.params.seed || params.standardize != o.params.standardize) {
    return false;
  }
  if (regression.has_value() != o.regression.has_value()) return false;
  if (regression) {
    const auto& a = *regression;
    const auto& b = *o.regression;
    return same_bits(a.slope, b.slope) && same_bits(a.intercept, b.intercept) &&
           same_bits(a.r, b.r) && same_bits(a.r2, b.r2) && same_bits(a.rmse, b.rmse) &&
           same_bits(a.f, b.f) && a.n == b.n;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Linear SVM

namespace {

struct Standardization {
  std::vector<double> means;
  std::vector<double> scales;
};

Standardization fit_standardization(const Eigen::MatrixXd& X, bool enabled) {
  const auto d = static_cast<std::size_t>(X.cols());
  Standardization s{std::vector<double>(d, 0.0), std::vector<double>(d, 1.0)};
  if (!enabled || X.rows() == 0) return s;
  const double n = static_cast<double>(X.rows());
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    const double mean = X.col(j).sum() / n;
    const double var = (X.col(j).array() - mean).square().sum() / n;
    s.means[static_cast<std::size_t>(j)] = mean;
    // Constant attributes map to zero rather than dividing by zero.
    s.scales[static_cast<std::size_t>(j)] = var > 0.0 ? std::sqrt(var) : 1.0;
  }
  return s;
}

Eigen::MatrixXd apply_standardization(const Eigen::MatrixXd& X, const Standardization& s) {
  Eigen::MatrixXd Z(X.rows(), X.cols());
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    const auto jj = static_cast<std::size_t>(j);
    Z.col(j) = (X.col(j).array() - s.means[jj]) / s.scales[jj];
  }
  return Z;
}

// Visiting order for all epochs, shared by every one-vs-rest subproblem.
std::vector<std::size_t> visit_order(std::size_t n, int epochs, std::uint64_t seed) {
  std::vector<std::size_t> order;
  order.reserve(n * static_cast<std::size_t>(epochs));
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(seed, stream_id("svm-order"));
  for (int e = 0; e < epochs; ++e) {
    for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
    order.insert(order.end(), perm.begin(), perm.end());
  }
  return order;
}

// With w_1 = 0 and step 1 / (lambda t), the Pegasos iterate is
// w_t = v / (lambda (t - 1)), v the sum of y_i [z_i, 1] over earlier margin
// violations. A step violates when y_i (v . [z_i, 1]) < lambda (t - 1).
struct Hyperplane {
  std::vector<double> w;
  double b{0.0};
};

Hyperplane pegasos_primal(const Eigen::MatrixXd& Z, const std::vector<double>& ys, double lambda,
                          const std::vector<std::size_t>& order) {
  const Eigen::Index d = Z.cols();
  Eigen::VectorXd v = Eigen::VectorXd::Zero(d);
  double vb = 0.0;
  for (std::size_t t = 1; t <= order.size(); ++t) {
    const auto i = static_cast<Eigen::Index>(order[t - 1]);
    const double yi = ys[order[t - 1]];
    const double margin = yi * (Z.row(i).dot(v) + vb);
    if (margin < lambda * static_cast<double>(t - 1)) {
      v += yi * Z.row(i).transpose();
      vb += yi;
    }
  }
  const double scale = 1.0 / (lambda * static_cast<double>(order.size()));
  Hyperplane h;
  h.w.resize(static_cast<std::size_t>(d));
  for (Eigen::Index j = 0; j < d; ++j) h.w[static_cast<std::size_t>(j)] = v[j] * scale;
  h.b = vb * scale;
  return h;
}

// Same iterates, tracking g_j = v . [z_j, 1] through K = Z Z^T + 1.
Hyperplane pegasos_gram(const Eigen::MatrixXd& Z, const Eigen::MatrixXd& K,
                        const std::vector<double>& ys, double lambda,
                        const std::vector<std::size_t>& order) {
  const Eigen::Index n = Z.rows();
  Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
  for (std::size_t t = 1; t <= order.size(); ++t) {
    const auto i = static_cast<Eigen::Index>(order[t - 1]);
    const double yi = ys[order[t - 1]];
    if (yi * g[i] < lambda * static_cast<double>(t - 1)) {
      g += yi * K.col(i);
      alpha[i] += yi;
    }
  }
  const double scale = 1.0 / (lambda * static_cast<double>(order.size()));
  const Eigen::VectorXd v = Z.transpose() * alpha;
  Hyperplane h;
  h.w.resize(static_cast<std::size_t>(Z.cols()));
  for (Eigen::Index j = 0; j < Z.cols(); ++j) h.w[static_cast<std::size_t>(j)] = v[j] * scale;
  h.b = alpha.sum() * scale;
  return h;
}

}  // namespace

LinearModel train_linear_svm(const FeatureDataset& ds, const SvmParams& params) {
  return train_linear_svm(ds, params, SvmSolver::Auto);
}

LinearModel train_linear_svm(const FeatureDataset& ds, const SvmParams& params,
                             SvmSolver solver) {
  ds.validate();
  if (!(params.C > 0.0)) throw Error(Errc::InvalidArgument, "C must be positive");
  if (params.epochs < 1) throw Error(Errc::InvalidArgument, "epochs must be >= 1");
  const auto classes = ds.classes();
  if (classes.size() < 2) {
    throw Error(Errc::SingleClass, "training data holds " + std::to_string(classes.size()) +
                                       " class(es); need at least 2");
  }
  const std::size_t n = ds.size();
  const auto stdz = fit_standardization(ds.X, params.standardize);
  const Eigen::MatrixXd Z = apply_standardization(ds.X, stdz);
  const double lambda = 1.0 / (params.C * static_cast<double>(n));
  const auto order = visit_order(n, params.epochs, params.seed);

  const bool use_gram =
      solver == SvmSolver::Gram || (solver == SvmSolver::Auto && n <= ds.dims());
  Eigen::MatrixXd K;
  if (use_gram) {
    K = Eigen::MatrixXd::Ones(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    K.selfadjointView<Eigen::Lower>().rankUpdate(Z);
    K = K.selfadjointView<Eigen::Lower>();
  }

  LinearModel model;
  model.kind = classes.size() == 2 ? ModelKind::SvmBinary : ModelKind::SvmOneVsRest;
  model.classes = classes;
  model.means = stdz.means;
  model.scales = stdz.scales;
  model.params = params;

  const std::vector<int> positives =
      classes.size() == 2 ? std::vector<int>{classes.back()} : classes;
  for (int positive : positives) {
    std::vector<double> ys(n);
    for (std::size_t i = 0; i < n; ++i) {
      ys[i] = static_cast<int>(std::lround(ds.y[i])) == positive ? 1.0 : -1.0;
    }
    const Hyperplane h =
        use_gram ? pegasos_gram(Z, K, ys, lambda, order) : pegasos_primal(Z, ys, lambda, order);
    model.weights.push_back(h.w);
    model.biases.push_back(h.b);
  }
  return model;
}

std::vector<double> decision_scores(const LinearModel& model, std::span<const double> x) {
  if (x.size() != model.dims()) {
    throw Error(Errc::DimensionMismatch, "model expects " + std::to_string(model.dims()) +
                                             " attributes, got " + std::to_string(x.size()));
  }
  std::vector<double> scores;
  for (std::size_t k = 0; k < model.weights.size(); ++k) {
    double s = model.biases[k];
    const auto& w = model.weights[k];
    for (std::size_t j = 0; j < x.size(); ++j) s += w[j] * ((x[j] - model.means[j]) / model.scales[j]);
    scores.push_back(s);
  }
  return scores;
}

double predict(const LinearModel& model, std::span<const double> x) {
  const auto scores = decision_scores(model, x);
  switch (model.kind) {
    case ModelKind::Regression: return scores.front();
    case ModelKind::SvmBinary:
      return static_cast<double>(scores.front() >= 0.0 ? model.classes.back()
                                                       : model.classes.front());
    case ModelKind::SvmOneVsRest: {
      std::size_t best = 0;
      for (std::size_t k = 1; k < scores.size(); ++k) {
        if (scores[k] > scores[best]) best = k;
      }
      return static_cast<double>(model.classes[best]);
    }
  }
  return 0.0;
}

std::vector<double> predict(const LinearModel& model, const Eigen::MatrixXd& X) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(X.rows()));
  std::vector<double> row(static_cast<std::size_t>(X.cols()));
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    for (Eigen::Index j = 0; j < X.cols(); ++j) row[static_cast<std::size_t>(j)] = X(i, j);
    out.push_back(predict(model, row));
  }
  return out;
}

Trainer svm_trainer(const SvmParams& params) {
  return [params](const FeatureDataset& ds) { return train_linear_svm(ds, params); };
}

// ---------------------------------------------------------------------------
// Metrics

ClassMetrics classification_metrics(const Confusion& confusion) {
  const std::size_t k = confusion.size();
  std::size_t total = 0;
  std::size_t trace = 0;
  for (std::size_t r = 0; r < k; ++r) {
    if (confusion[r].size() != k) throw Error(Errc::DimensionMismatch, "confusion must be square");
    for (std::size_t c = 0; c < k; ++c) total += confusion[r][c];
    trace += confusion[r][r];
  }
  if (total == 0) throw Error(Errc::EmptyConfusion, "confusion matrix holds no predictions");

  ClassMetrics m;
  m.accuracy = static_cast<double>(trace) / static_cast<double>(total);
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t truth = 0;
    std::size_t predicted = 0;
    for (std::size_t o = 0; o < k; ++o) {
      truth += confusion[c][o];
      predicted += confusion[o][c];
    }
    const double tp = static_cast<double>(confusion[c][c]);
    const double p = predicted > 0 ? tp / static_cast<double>(predicted) : 0.0;
    const double r = truth > 0 ? tp / static_cast<double>(truth) : 0.0;
    if (truth == 0 || predicted == 0) m.undefined_class = true;
    m.precision.push_back(p);
    m.recall.push_back(r);
    m.f1.push_back(p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0);
  }
  const double kk = static_cast<double>(k);
  m.macro_precision = std::accumulate(m.precision.begin(), m.precision.end(), 0.0) / kk;
  m.macro_recall = std::accumulate(m.recall.begin(), m.recall.end(), 0.0) / kk;
  m.macro_f1 = std::accumulate(m.f1.begin(), m.f1.end(), 0.0) / kk;
  return m;
}

ClassMetrics mean_metrics(std::span<const ClassMetrics> metrics) {
  ClassMetrics out;
  if (metrics.empty()) return out;
  const double n = static_cast<double>(metrics.size());
  const std::size_t k = metrics.front().precision.size();
  out.precision.assign(k, 0.0);
  out.recall.assign(k, 0.0);
  out.f1.assign(k, 0.0);
  for (const auto& m : metrics) {
    if (m.precision.size() != k) {
      throw Error(Errc::DimensionMismatch, "metric sets cover different class counts");
    }
    out.accuracy += m.accuracy / n;
    out.macro_precision += m.macro_precision / n;
    out.macro_recall += m.macro_recall / n;
    out.macro_f1 += m.macro_f1 / n;
    for (std::size_t c = 0; c < k; ++c) {
      out.precision[c] += m.precision[c] / n;
      out.recall[c] += m.recall[c] / n;
      out.f1[c] += m.f1[c] / n;
    }
    out.undefined_class = out.undefined_class || m.undefined_class;
  }
  return out;
}

std::string_view to_string(EvalScheme scheme) noexcept {
  switch (scheme) {
    case EvalScheme::LopoClassify: return "lopo-classify";
    case EvalScheme::LoroClassify: return "loro-classify";
    case EvalScheme::LopoRegress: return "lopo-regress";
    case EvalScheme::Holdout: return "holdout";
  }
  return "?";
}

EvalScheme parse_scheme(std::string_view text) {
  if (text == "lopo" || text == "lopo-classify") return EvalScheme::LopoClassify;
  if (text == "loro" || text == "loro-classify") return EvalScheme::LoroClassify;
  if (text == "lopo-regress") return EvalScheme::LopoRegress;
  if (text == "holdout") return EvalScheme::Holdout;
  throw Error(Errc::InvalidArgument, "unknown evaluation scheme '" + std::string(text) + "'");
}

// ---------------------------------------------------------------------------
// Cross-validation

namespace {

std::size_t class_index(const std::vector<int>& classes, double label) {
  const int id = static_cast<int>(std::lround(label));
  const auto it = std::lower_bound(classes.begin(), classes.end(), id);
  if (it == classes.end() || *it != id) {
    throw Error(Errc::InvalidArgument, "label " + std::to_string(id) + " is not a known class");
  }
  return static_cast<std::size_t>(it - classes.begin());
}

Confusion empty_confusion(std::size_t k) { return Confusion(k, std::vector<std::size_t>(k, 0)); }

// Trains on `train`, tests on `test`, and folds the outcome into the report.
void run_classification_fold(const FeatureDataset& ds, const std::vector<std::size_t>& train,
                             const std::vector<std::size_t>& test, std::string name,
                             const Trainer& trainer, EvalReport& report,
                             std::vector<ClassMetrics>& fold_metrics) {
  const FeatureDataset train_ds = ds.subset(train);
  if (train_ds.classes().size() < 2) {
    throw Error(Errc::DegenerateFold,
                "fold '" + name + "' leaves fewer than 2 classes in training");
  }
  const LinearModel model = trainer(train_ds);
  const FeatureDataset test_ds = ds.subset(test);
  const auto predicted = predict(model, test_ds.X);

  const std::size_t k = report.classes.size();
  Confusion fold = empty_confusion(k);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < test.size(); ++i) {
    const auto t = class_index(report.classes, test_ds.y[i]);
    const auto p = class_index(report.classes, predicted[i]);
    ++fold[t][p];
    ++report.confusion[t][p];
    if (t == p) ++correct;
    report.truth.push_back(test_ds.y[i]);
    report.predicted.push_back(predicted[i]);
  }
  FoldResult fr;
  fr.name = std::move(name);
  fr.train_count = train.size();
  fr.test_count = test.size();
  fr.accuracy = test.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(test.size());
  report.folds.push_back(std::move(fr));
  if (!test.empty()) fold_metrics.push_back(classification_metrics(fold));
}

}  // namespace

EvalReport leave_one_person_out(const FeatureDataset& ds, const Trainer& trainer) {
  ds.validate();
  if (ds.person_ids.size() != ds.size()) {
    throw Error(Errc::DimensionMismatch, "leave-one-person-out needs a person id per instance");
  }
  const auto persons = ds.persons();
  if (persons.size() < 2) {
    throw Error(Errc::SinglePerson, "leave-one-person-out needs at least 2 persons");
  }
  EvalReport report;
  report.scheme = EvalScheme::LopoClassify;
  report.classes = ds.classes();
  report.confusion = empty_confusion(report.classes.size());
  std::vector<ClassMetrics> fold_metrics;
  for (const auto& person : persons) {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
    for (std::size_t i = 0; i < ds.size(); ++i) {
      (ds.person_ids[i] == person ? test : train).push_back(i);
    }
    run_classification_fold(ds, train, test, person, trainer, report, fold_metrics);
  }
  report.pooled = classification_metrics(report.confusion);
  report.fold_average = mean_metrics(fold_metrics);
  return report;
}

EvalReport leave_one_repetition_out(const FeatureDataset& ds, std::size_t k,
                                    const Trainer& trainer, std::uint64_t seed) {
  ds.validate();
  if (ds.repetition_ids.size() != ds.size()) {
    throw Error(Errc::DimensionMismatch, "leave-one-repetition-out needs a repetition id per instance");
  }
  std::set<int> distinct(ds.repetition_ids.begin(), ds.repetition_ids.end());
  std::vector<int> reps(distinct.begin(), distinct.end());
  if (k < 2 || reps.size() < k) {
    throw Error(Errc::TooFewRepetitions, std::to_string(reps.size()) + " repetition(s) for " +
                                             std::to_string(k) + " folds");
  }
  std::vector<std::vector<int>> folds(k);
  if (reps.size() == k) {
    for (std::size_t f = 0; f < k; ++f) folds[f].push_back(reps[f]);
  } else {
    Rng rng(seed, stream_id("loro-partition"));
    for (std::size_t i = reps.size(); i > 1; --i) std::swap(reps[i - 1], reps[rng.below(i)]);
    for (std::size_t p = 0; p < reps.size(); ++p) folds[p % k].push_back(reps[p]);
    for (auto& f : folds) std::sort(f.begin(), f.end());
  }

  EvalReport report;
  report.scheme = EvalScheme::LoroClassify;
  report.classes = ds.classes();
  report.confusion = empty_confusion(report.classes.size());
  report.seed = seed;
  std::vector<ClassMetrics> fold_metrics;
  for (const auto& fold : folds) {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
    for (std::size_t i = 0; i < ds.size(); ++i) {
      const bool held = std::find(fold.begin(), fold.end(), ds.repetition_ids[i]) != fold.end();
      (held ? test : train).push_back(i);
    }
    std::string name = "rep:";
    for (std::size_t j = 0; j < fold.size(); ++j) {
      if (j) name += ",";
      name += std::to_string(fold[j]);
    }
    run_classification_fold(ds, train, test, std::move(name), trainer, report, fold_metrics);
  }
  report.pooled = classification_metrics(report.confusion);
  report.fold_average = mean_metrics(fold_metrics);
  return report;
}

// ---------------------------------------------------------------------------
// Regression

LinearModel fit_linear_regression(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error(Errc::DimensionMismatch, "x and y differ in length");
  }
  const std::size_t n = x.size();
  if (n < 3) throw Error(Errc::TooFewPoints, "regression needs at least 3 points, got " + std::to_string(n));
  const double nn = static_cast<double>(n);
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / nn;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / nn;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw Error(Errc::ConstantPredictor, "predictor is constant");

  RegressionDiagnostics d;
  d.n = n;
  d.slope = sxy / sxx;
  d.intercept = my - d.slope * mx;
  double ss_res = 0.0, ss_reg = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double fit = d.slope * x[i] + d.intercept;
    ss_res += (y[i] - fit) * (y[i] - fit);
    ss_reg += (fit - my) * (fit - my);
  }
  d.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  d.r = syy > 0.0 ? sxy / std::sqrt(sxx * syy) : 0.0;
  d.rmse = std::sqrt(ss_res / nn);
  d.f = ss_res > 0.0 ? ss_reg / (ss_res / (nn - 2.0)) : std::numeric_limits<double>::infinity();

  LinearModel model;
  model.kind = ModelKind::Regression;
  model.weights = {{d.slope}};
  model.biases = {d.intercept};
  model.means = {0.0};
  model.scales = {1.0};
  model.params.standardize = false;
  model.regression = d;
  return model;
}

EvalReport lopo_regression(const FeatureDataset& ds) {
  ds.validate();
  if (ds.X.cols() < 1) throw Error(Errc::DimensionMismatch, "regression needs a predictor column");
  if (ds.person_ids.size() != ds.size()) {
    throw Error(Errc::DimensionMismatch, "leave-one-person-out needs a person id per instance");
  }
  const auto persons = ds.persons();
  if (persons.size() < 3) {
    throw Error(Errc::TooFewPoints, "leave-one-person-out regression needs at least 3 persons");
  }
  EvalReport report;
  report.scheme = EvalScheme::LopoRegress;
  for (const auto& person : persons) {
    std::vector<double> tx, ty;
    std::vector<std::size_t> test;
    for (std::size_t i = 0; i < ds.size(); ++i) {
      if (ds.person_ids[i] == person) {
        test.push_back(i);
      } else {
        tx.push_back(ds.X(static_cast<Eigen::Index>(i), 0));
        ty.push_back(ds.y[i]);
      }
    }
    const LinearModel model = fit_linear_regression(tx, ty);
    double ss = 0.0;
    for (std::size_t i : test) {
      const double xi = ds.X(static_cast<Eigen::Index>(i), 0);
      const double p = model.regression->slope * xi + model.regression->intercept;
      report.truth.push_back(ds.y[i]);
      report.predicted.push_back(p);
      ss += (ds.y[i] - p) * (ds.y[i] - p);
    }
    FoldResult fr;
    fr.name = person;
    fr.train_count = tx.size();
    fr.test_count = test.size();
    fr.rmse = std::sqrt(ss / static_cast<double>(test.size()));
    report.folds.push_back(std::move(fr));
  }
  const double n = static_cast<double>(report.truth.size());
  const double mean = std::accumulate(report.truth.begin(), report.truth.end(), 0.0) / n;
  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < report.truth.size(); ++i) {
    ss_res += (report.truth[i] - report.predicted[i]) * (report.truth[i] - report.predicted[i]);
    ss_tot += (report.truth[i] - mean) * (report.truth[i] - mean);
  }
  report.rmse = std::sqrt(ss_res / n);
  report.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : (ss_res == 0.0 ? 1.0 : 0.0);
  return report;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

constexpr int kModelFormatVersion = 1;

json num(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

double get_num(const json& j) {
  if (j.is_string()) return parse_double(j.get<std::string>());
  if (!j.is_number()) throw Error(Errc::ParseError, "expected a number, got " + j.dump());
  return j.get<double>();
}

json nums(const std::vector<double>& values) {
  json arr = json::array();
  for (double v : values) arr.push_back(num(v));
  return arr;
}

std::vector<double> get_nums(const json& j) {
  std::vector<double> out;
  for (const auto& v : j) out.push_back(get_num(v));
  return out;
}

json metrics_json(const ClassMetrics& m) {
  return {{"accuracy", num(m.accuracy)},
          {"macro_precision", num(m.macro_precision)},
          {"macro_recall", num(m.macro_recall)},
          {"macro_f1", num(m.macro_f1)},
          {"precision", nums(m.precision)},
          {"recall", nums(m.recall)},
          {"f1", nums(m.f1)},
          {"undefined_class", m.undefined_class}};
}

}  // namespace

std::string model_to_json(const LinearModel& model) {
  json j;
  j["format"] = "cogload-linear-model";
  j["version"] = kModelFormatVersion;
  j["kind"] = std::string(to_string(model.kind));
  j["classes"] = model.classes;
  json weights = json::array();
  for (const auto& w : model.weights) weights.push_back(nums(w));
  j["weights"] = weights;
  j["biases"] = nums(model.biases);
  j["standardization"] = {{"means", nums(model.means)}, {"scales", nums(model.scales)}};
  j["hyperparams"] = {{"C", num(model.params.C)},
                      {"epochs", model.params.epochs},
                      {"standardize", model.params.standardize}};
  j["seed"] = model.params.seed;
  if (model.regression) {
    const auto& d = *model.regression;
    j["regression"] = {{"slope", num(d.slope)}, {"intercept", num(d.intercept)},
                       {"r", num(d.r)},         {"r2", num(d.r2)},
                       {"rmse", num(d.rmse)},   {"f", num(d.f)},
                       {"n", d.n}};
  }
  return j.dump(2);
}

LinearModel model_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(Errc::ParseError, std::string("model JSON: ") + e.what());
  }
  try {
    if (j.value("format", "") != "cogload-linear-model") {
      throw Error(Errc::ParseError, "not a linear model document");
    }
    const int version = j.at("version").get<int>();
    if (version != kModelFormatVersion) {
      throw Error(Errc::ParseError, "unsupported model version " + std::to_string(version));
    }
    LinearModel m;
    m.kind = parse_model_kind(j.at("kind").get<std::string>());
    m.classes = j.at("classes").get<std::vector<int>>();
    for (const auto& w : j.at("weights")) m.weights.push_back(get_nums(w));
    m.biases = get_nums(j.at("biases"));
    m.means = get_nums(j.at("standardization").at("means"));
    m.scales = get_nums(j.at("standardization").at("scales"));
    const auto& hp = j.at("hyperparams");
    m.params.C = get_num(hp.at("C"));
    m.params.epochs = hp.at("epochs").get<int>();
    m.params.standardize = hp.at("standardize").get<bool>();
    m.params.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("regression")) {
      const auto& r = j.at("regression");
      RegressionDiagnostics d;
      d.slope = get_num(r.at("slope"));
      d.intercept = get_num(r.at("intercept"));
      d.r = get_num(r.at("r"));
      d.r2 = get_num(r.at("r2"));
      d.rmse = get_num(r.at("rmse"));
      d.f = get_num(r.at("f"));
      d.n = r.at("n").get<std::size_t>();
      m.regression = d;
    }
    if (m.weights.size() != m.biases.size() || m.means.size() != m.scales.size()) {
      throw Error(Errc::ParseError, "model arrays disagree in length");
    }
    for (const auto& w : m.weights) {
      if (w.size() != m.means.size()) throw Error(Errc::ParseError, "weight row has wrong length");
    }
    return m;
  } catch (const json::exception& e) {
    throw Error(Errc::ParseError, std::string("model JSON: ") + e.what());
  }
}

std::string report_to_json(const EvalReport& report) {
  json j;
  j["scheme"] = std::string(to_string(report.scheme));
  if (report.seed) j["seed"] = *report.seed;
  json folds = json::array();
  for (const auto& f : report.folds) {
    json fj = {{"name", f.name}, {"train_count", f.train_count}, {"test_count", f.test_count}};
    if (report.scheme == EvalScheme::LopoRegress) {
      fj["rmse"] = num(f.rmse);
    } else {
      fj["accuracy"] = num(f.accuracy);
    }
    folds.push_back(fj);
  }
  j["folds"] = folds;
  if (report.scheme == EvalScheme::LopoRegress) {
    j["rmse"] = num(report.rmse);
    j["r2"] = num(report.r2);
    j["points"] = report.truth.size();
  } else {
    j["classes"] = report.classes;
    j["confusion"] = report.confusion;
    j["pooled"] = metrics_json(report.pooled);
    j["fold_average"] = metrics_json(report.fold_average);
  }
  j["truth"] = nums(report.truth);
  j["predicted"] = nums(report.predicted);
  return j.dump(2);
}

}  // namespace cogload
