#include "cogload/error.hpp"
#include "cogload/learn.hpp"
#include "cogload/rng.hpp"

#include "doctest.h"

#include <algorithm>
#include <cmath>

using namespace cogload;

namespace {

// Gaussian blobs, one per class, centred at +-offset along every axis.
FeatureDataset blobs(const std::vector<std::vector<double>>& centres, std::size_t per_class,
                     double sigma, std::size_t persons, std::uint64_t seed) {
  Rng rng(seed, stream_id("blobs"));
  const std::size_t d = centres.front().size();
  FeatureDataset ds;
  ds.X.resize(static_cast<Eigen::Index>(centres.size() * per_class), static_cast<Eigen::Index>(d));
  Eigen::Index row = 0;
  for (std::size_t c = 0; c < centres.size(); ++c) {
    for (std::size_t i = 0; i < per_class; ++i, ++row) {
      for (std::size_t j = 0; j < d; ++j) {
        ds.X(row, static_cast<Eigen::Index>(j)) = centres[c][j] + sigma * rng.normal();
      }
      ds.y.push_back(static_cast<double>(c));
      ds.person_ids.push_back("P" + std::to_string(i % persons));
      ds.repetition_ids.push_back(static_cast<int>(i / persons) + 1);
      ds.conditions.push_back("circle-fast");
    }
  }
  return ds;
}

double training_accuracy(const LinearModel& m, const FeatureDataset& ds) {
  const auto p = predict(m, ds.X);
  std::size_t ok = 0;
  for (std::size_t i = 0; i < ds.size(); ++i) ok += p[i] == ds.y[i];
  return static_cast<double>(ok) / static_cast<double>(ds.size());
}

}  // namespace

TEST_SUITE("learn") {
  TEST_CASE("separable blobs train to full accuracy") {
    const auto ds = blobs({std::vector<double>(3, -5.0), std::vector<double>(3, 5.0)}, 100, 0.5, 10, 1);
    const auto m = train_linear_svm(ds);
    CHECK(m.kind == ModelKind::SvmBinary);
    CHECK(training_accuracy(m, ds) == 1.0);
  }

  TEST_CASE("label flip negates the decision function") {
    const auto ds = blobs({{-1.0, 0.5}, {1.0, -0.5}}, 40, 1.0, 4, 2);
    auto flipped = ds;
    for (auto& y : flipped.y) y = 1.0 - y;
    const auto a = train_linear_svm(ds);
    const auto b = train_linear_svm(flipped);
    for (Eigen::Index i = 0; i < ds.X.rows(); ++i) {
      const Eigen::VectorXd row = ds.X.row(i);
      const auto sa = decision_scores(a, std::span<const double>(row.data(), 2));
      const auto sb = decision_scores(b, std::span<const double>(row.data(), 2));
      CHECK(sa[0] == doctest::Approx(-sb[0]).epsilon(1e-9).scale(1e-9));
    }
  }

  TEST_CASE("one-vs-rest on four blobs") {
    const auto ds = blobs({{-6, -6}, {6, -6}, {-6, 6}, {6, 6}}, 50, 1.0, 10, 3);
    const auto m = train_linear_svm(ds);
    CHECK(m.kind == ModelKind::SvmOneVsRest);
    CHECK(m.classes == std::vector<int>{0, 1, 2, 3});
    CHECK(training_accuracy(m, ds) >= 0.99);
  }

  TEST_CASE("primal and gram solvers agree") {
    auto wide = blobs({std::vector<double>(60, -1.0), std::vector<double>(60, 1.0)}, 20, 1.0, 5, 4);
    SvmParams p;
    p.epochs = 50;
    const auto a = train_linear_svm(wide, p, SvmSolver::Primal);
    const auto b = train_linear_svm(wide, p, SvmSolver::Gram);
    for (std::size_t j = 0; j < a.weights[0].size(); ++j) {
      CHECK(a.weights[0][j] == doctest::Approx(b.weights[0][j]).epsilon(1e-8).scale(1e-10));
    }
    CHECK(a.biases[0] == doctest::Approx(b.biases[0]).epsilon(1e-8).scale(1e-10));
  }

  TEST_CASE("training is deterministic per seed") {
    const auto ds = blobs({{-1.0, 0.0}, {1.0, 0.0}}, 30, 1.5, 3, 5);
    CHECK(train_linear_svm(ds) == train_linear_svm(ds));
  }

  TEST_CASE("boundary ties go to the positive class") {
    LinearModel m;
    m.kind = ModelKind::SvmBinary;
    m.classes = {0, 1};
    m.weights = {{1.0}};
    m.biases = {-2.0};
    m.means = {0.0};
    m.scales = {1.0};
    const double x = 2.0;
    CHECK(predict(m, std::span<const double>(&x, 1)) == 1.0);
  }

  TEST_CASE("regression fit") {
    std::vector<double> x, y;
    for (int i = 0; i < 10; ++i) {
      x.push_back(i);
      y.push_back(2.0 * i + 1.0);
    }
    const auto m = fit_linear_regression(x, y);
    const auto& d = *m.regression;
    CHECK(d.slope == doctest::Approx(2.0));
    CHECK(d.intercept == doctest::Approx(1.0));
    CHECK(d.r2 == doctest::Approx(1.0));
    CHECK(d.rmse == doctest::Approx(0.0));
    const double probe = 4.5;
    CHECK(predict(m, std::span<const double>(&probe, 1)) == doctest::Approx(10.0));

    Rng rng(6, 0);
    std::vector<double> nx(1000), ny(1000);
    for (std::size_t i = 0; i < 1000; ++i) {
      nx[i] = rng.normal();
      ny[i] = rng.normal();
    }
    CHECK(fit_linear_regression(nx, ny).regression->r2 <= 0.1);

    CHECK_THROWS_AS(fit_linear_regression(std::vector<double>{1, 2}, std::vector<double>{1, 2}), Error);
    try {
      fit_linear_regression(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3});
      FAIL("expected ConstantPredictor");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::ConstantPredictor);
    }
  }

  TEST_CASE("identity regression model predicts x") {
    LinearModel m = fit_linear_regression(std::vector<double>{0, 1, 2}, std::vector<double>{0, 1, 2});
    for (double x : {-3.0, 0.25, 7.0}) CHECK(predict(m, std::span<const double>(&x, 1)) == doctest::Approx(x));
  }

  TEST_CASE("metrics on hand-computed confusions") {
    const auto perfect = classification_metrics({{5, 0}, {0, 7}});
    CHECK(perfect.accuracy == 1.0);
    CHECK(perfect.macro_f1 == 1.0);

    const auto m = classification_metrics({{8, 2}, {3, 7}});
    CHECK(m.accuracy == doctest::Approx(0.75));
    CHECK(m.precision[0] == doctest::Approx(8.0 / 11.0));
    CHECK(m.recall[0] == doctest::Approx(0.8));
    // F1_0 = 16/21, F1_1 = 14/19
    CHECK(m.macro_f1 == doctest::Approx((16.0 / 21.0 + 14.0 / 19.0) / 2.0));
    CHECK(m.macro_f1 == doctest::Approx(0.7493734).epsilon(1e-6));

    const auto one = classification_metrics({{10, 0}, {10, 0}});
    CHECK(one.accuracy == 0.5);
    CHECK(one.macro_f1 == doctest::Approx(1.0 / 3.0));
    CHECK(one.undefined_class);

    CHECK_THROWS_AS(classification_metrics({{0, 0}, {0, 0}}), Error);
  }

  TEST_CASE("leave one person out") {
    const auto ds = blobs({std::vector<double>(4, -3.0), std::vector<double>(4, 3.0)}, 36, 0.5, 18, 7);
    const auto r = leave_one_person_out(ds, svm_trainer());
    CHECK(r.folds.size() == 18);
    CHECK(r.pooled.accuracy == 1.0);

    auto single = ds;
    single.person_ids.assign(ds.size(), "P0");
    try {
      leave_one_person_out(single, svm_trainer());
      FAIL("expected SinglePerson");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::SinglePerson);
    }
  }

  TEST_CASE("leave one repetition out") {
    auto ds = blobs({{-3.0, -3.0}, {3.0, 3.0}}, 14, 0.5, 1, 8);
    // one person, seven repetitions per class
    for (std::size_t i = 0; i < ds.size(); ++i) ds.repetition_ids[i] = static_cast<int>(i % 7) + 1;
    const auto r = leave_one_repetition_out(ds, 7, svm_trainer(), 1);
    CHECK(r.folds.size() == 7);
    CHECK(r.pooled.accuracy == 1.0);

    auto two = ds;
    for (std::size_t i = 0; i < two.size(); ++i) two.repetition_ids[i] = static_cast<int>(i % 2) + 1;
    const auto r2 = leave_one_repetition_out(two, 2, svm_trainer(), 1);
    REQUIRE(r2.folds.size() == 2);
    CHECK(r2.folds[0].test_count + r2.folds[1].test_count == two.size());

    try {
      leave_one_repetition_out(two, 3, svm_trainer(), 1);
      FAIL("expected TooFewRepetitions");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::TooFewRepetitions);
    }
  }

  TEST_CASE("lopo regression") {
    FeatureDataset exact;
    exact.X.resize(30, 1);
    Rng rng(12, 0);
    for (int i = 0; i < 30; ++i) {
      const double x = rng.uniform() * 10.0;
      exact.X(i, 0) = x;
      exact.y.push_back(0.5 * x - 2.0);
      exact.person_ids.push_back("P" + std::to_string(i % 10));
    }
    const auto r = lopo_regression(exact);
    CHECK(r.rmse == doctest::Approx(0.0).scale(1e-9));
    CHECK(r.r2 == doctest::Approx(1.0));

    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      Rng n(seed, stream_id("noise"));
      auto noisy = exact;
      for (auto& y : noisy.y) y += 0.05 * n.normal();
      worst = std::max(worst, lopo_regression(noisy).rmse);
    }
    CHECK(worst <= 0.1);
  }

  TEST_CASE("model json round trip") {
    const auto ds = blobs({{-6, -6}, {6, -6}, {-6, 6}}, 20, 1.0, 5, 9);
    const auto m = train_linear_svm(ds);
    CHECK(model_from_json(model_to_json(m)) == m);
    const auto reg = fit_linear_regression(std::vector<double>{1, 2, 4}, std::vector<double>{1, 3, 4});
    const auto back = model_from_json(model_to_json(reg));
    CHECK(back == reg);
    CHECK(back.regression->f == reg.regression->f);
    CHECK_THROWS_AS(model_from_json("{\"format\":\"other\"}"), Error);
  }
}
