#include <doctest.h>

#include <cmath>

#include "fwboost/adaboost_fw.hpp"
#include "fwboost/experiment.hpp"
#include "fwboost/synthetic.hpp"
#include "oracles.hpp"

using namespace fwboost;

TEST_CASE("distribution starts uniform") {
  const DistributionWeights d = DistributionWeights::uniform(5);
  const Vector w = d.weights();
  for (Index i = 0; i < 5; ++i) CHECK(w(i) == doctest::Approx(0.2).epsilon(1e-15));
}

TEST_CASE("distribution update") {
  Vector labels(2), h(2);
  labels << 1, 1;
  h << 1, -1;  // correct on the first point only
  const DistributionWeights uniform = DistributionWeights::uniform(2);

  SUBCASE("zero step is the identity") {
    const DistributionWeights next = update_distribution(uniform, 0.0, 1.0, h, labels);
    CHECK(next.weights()(0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(next.weights()(1) == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("full step forgets the old distribution") {
    DistributionWeights skewed;
    skewed.log_weights.resize(2);
    skewed.log_weights << std::log(0.9), std::log(0.1);
    const DistributionWeights a = update_distribution(skewed, 1.0, 1.0, h, labels);
    const DistributionWeights b = update_distribution(uniform, 1.0, 1.0, h, labels);
    CHECK(a.weights()(0) == doctest::Approx(b.weights()(0)).epsilon(1e-12));
    CHECK(a.weights()(1) == doctest::Approx(b.weights()(1)).epsilon(1e-12));
  }
  SUBCASE("a zero weight stays zero below the full step") {
    DistributionWeights degenerate;
    degenerate.log_weights.resize(2);
    degenerate.log_weights << 0.0, -std::numeric_limits<double>::infinity();
    const DistributionWeights next = update_distribution(degenerate, 0.5, 1.0, h, labels);
    CHECK(next.weights()(1) == 0.0);
    CHECK(next.weights()(0) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("worked ratio matches one generic step") {
    const double gamma = 2.0 / 3.0;
    const DistributionWeights next = update_distribution(uniform, gamma, 1.0, h, labels);
    const Vector w = next.weights();
    CHECK(w(0) / w(1) == doctest::Approx(std::exp(-4.0 / 3.0)).epsilon(1e-12));
    // the view through the ensemble: D_2 proportional to exp(-y * F_1)
    const Vector f1 = gamma * 1.0 * h;
    Vector direct(2);
    for (Index i = 0; i < 2; ++i) direct(i) = std::exp(-labels(i) * f1(i));
    direct /= direct.sum();
    CHECK(w(0) == doctest::Approx(direct(0)).epsilon(1e-12));
    CHECK(w(1) == doctest::Approx(direct(1)).epsilon(1e-12));
  }
}

TEST_CASE("reweightening run equals the generic exponential-loss run") {
  for (std::uint64_t seed : {11ull, 12ull}) {
    SynthParams params;
    params.m = 40;
    params.d = 2;
    params.eta = 0.15;
    params.separation = 2.0;
    const Dataset data = generate_synthetic("two-gaussian", params, seed);

    FitOptions opt;
    opt.capacity = 4.0;
    opt.iterations = 50;
    opt.policy = StepPolicy::line_search();
    opt.gap_tolerance = 0.0;
    opt.trace = true;

    const FitReport ada = run_adaboost_fw(data, opt);
    const FitReport generic = run_fwboost_c(data, LossModel::exponential(4.0), opt);

    REQUIRE(ada.records.size() == generic.records.size());
    REQUIRE(ada.weight_trace.size() == generic.weight_trace.size());
    for (size_t t = 0; t < ada.records.size(); ++t) {
      CHECK(oracles::close_rel(ada.records[t].step_size, generic.records[t].step_size, 1e-9));
      const Vector& dw = ada.weight_trace[t];
      const Vector& gw = generic.weight_trace[t];
      for (Index i = 0; i < dw.size(); ++i) CHECK(oracles::close_rel(dw(i), gw(i), 1e-9));
      const auto& da = ada.coefficient_trace[t];
      const auto& ga = generic.coefficient_trace[t];
      REQUIRE(da.size() == ga.size());
      for (size_t j = 0; j < da.size(); ++j) CHECK(oracles::close_rel(da[j], ga[j], 1e-9));
    }
  }
}

TEST_CASE("distribution tracks the ensemble margins") {
  SynthParams params;
  params.m = 30;
  params.d = 2;
  params.eta = 0.1;
  const Dataset data = generate_synthetic("two-gaussian", params, 21);
  FitOptions opt;
  opt.capacity = 2.0;
  opt.iterations = 30;
  opt.policy = StepPolicy::line_search();
  opt.trace = true;
  const FitReport report = run_adaboost_fw(data, opt);

  Vector preds = Vector::Zero(data.rows());
  size_t t = 0;
  // weight_trace[t] is D_{t+1} as seen by the learner, i.e. exp(-y F_t) normalised
  CHECK(report.weight_trace[0](0) == doctest::Approx(1.0 / 30.0).epsilon(1e-12));
  replay_predictions(report, data.features, [&](int, const Vector& p) {
    ++t;
    if (t < report.weight_trace.size()) {
      Vector expected(data.rows());
      for (Index i = 0; i < data.rows(); ++i)
        expected(i) = std::exp(-data.targets(i) * p(i));
      expected /= expected.sum();
      const Vector& dw = report.weight_trace[t];
      for (Index i = 0; i < data.rows(); ++i)
        CHECK(oracles::close_rel(dw(i), expected(i), 1e-9));
    }
    preds = p;
  });

  for (const auto& rec : report.records)
    CHECK(rec.coefficient_norm <= opt.capacity + kFeasibilityTolerance);
}

TEST_CASE("rejects non-classification input") {
  Dataset data;
  data.task = Task::kRegression;
  data.features = Matrix::Random(4, 1);
  data.targets = Vector::Zero(4);
  FitOptions opt;
  CHECK_THROWS_AS(run_adaboost_fw(data, opt), std::invalid_argument);
}

TEST_CASE("sign(0) counts as the positive class") {
  Vector targets(2);
  targets << 1, -1;
  const double err = evaluate_metric(Metric::kZeroOneError, Vector::Zero(2), targets);
  CHECK(err == doctest::Approx(0.5).epsilon(1e-15));
}
