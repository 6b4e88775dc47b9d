#include <doctest.h>

#include <cmath>

#include "fwboost/baselines.hpp"
#include "fwboost/synthetic.hpp"
#include "oracles.hpp"

using namespace fwboost;

namespace {

Dataset noisy_regression(std::uint64_t seed, int m = 120, double noise = 0.5) {
  SynthParams params;
  params.m = m;
  params.noise = noise;
  return generate_synthetic("step", params, seed);
}

double slope_along(const LossModel& loss, const Vector& preds, const Vector& direction,
                   const Vector& targets, double alpha) {
  double s = 0.0;
  for (Index i = 0; i < preds.size(); ++i)
    s += loss.derivative(preds(i) + alpha * direction(i), targets(i)) * direction(i);
  return s / static_cast<double>(preds.size());
}

}  // namespace

TEST_CASE("plain gradient boosting never increases the training risk") {
  const Dataset data = noisy_regression(3);
  const LossModel loss = LossModel::squared(1.0);
  BaselineConfig config;
  const FitReport report = run_gradient_boosting(data, loss, config, 200);
  double previous = report.initial_risk;
  for (const auto& rec : report.records) {
    CHECK(rec.train_risk <= previous + 1e-12);
    previous = rec.train_risk;
  }
  CHECK(report.records.size() == 200);
}

TEST_CASE("shrinkage scales the line-search step") {
  const Dataset data = noisy_regression(4, 60);
  const LossModel loss = LossModel::squared(1.0);
  BaselineConfig plain;
  BaselineConfig shrunk;
  shrunk.shrinkage = 0.1;

  const FitReport a = run_gradient_boosting(data, loss, plain, 1);
  const FitReport b = run_gradient_boosting(data, loss, shrunk, 1);
  // one round: identical stump, so the recorded step is exactly 0.1 times
  CHECK(b.records[0].step_size == 0.1 * a.records[0].step_size);
  CHECK(b.ensemble.atom(0) == a.ensemble.atom(0));

  // across a longer run each recorded step divided by nu is a stationary
  // point of the unshrunk line search at the replayed state
  const FitReport c = run_gradient_boosting(data, loss, shrunk, 25);
  Vector preds = Vector::Zero(data.rows());
  for (size_t t = 0; t < c.records.size(); ++t) {
    const auto& rec = c.records[t];
    const Vector direction = c.ensemble.atom(rec.atom_index).evaluate(data.features);
    const double raw = rec.step_size / 0.1;
    if (raw > 0.0) CHECK(std::abs(slope_along(loss, preds, direction, data.targets, raw)) <= 1e-6);
    preds += rec.step_size * direction;
  }
}

TEST_CASE("early stopping halts a noisy fit that plain boosting continues") {
  const Dataset data = noisy_regression(7, 150, 0.6);
  const LossModel loss = LossModel::squared(1.0);
  BaselineConfig eager;
  BaselineConfig patient;
  patient.patience = 10;
  patient.seed = 99;
  const FitReport plain = run_gradient_boosting(data, loss, eager, 1000);
  const FitReport stopped = run_gradient_boosting(data, loss, patient, 1000);
  CHECK(plain.records.size() == 1000);
  CHECK(stopped.termination == TerminationReason::kEarlyStopped);
  CHECK(stopped.records.size() < 1000);
  CHECK(stopped.records.size() <= plain.records.size());
}

TEST_CASE("subsampling with fraction one is plain boosting bit for bit") {
  const Dataset data = noisy_regression(9, 80);
  const LossModel loss = LossModel::squared(1.0);
  BaselineConfig plain;
  plain.seed = 5;
  BaselineConfig full_sub = plain;
  full_sub.subsample = 1.0;
  const FitReport a = run_gradient_boosting(data, loss, plain, 50);
  const FitReport b = run_gradient_boosting(data, loss, full_sub, 50);
  REQUIRE(a.records.size() == b.records.size());
  for (size_t t = 0; t < a.records.size(); ++t) {
    CHECK(a.records[t].step_size == b.records[t].step_size);
    CHECK(a.records[t].train_risk == b.records[t].train_risk);
    CHECK(a.ensemble.atom(a.records[t].atom_index) == b.ensemble.atom(b.records[t].atom_index));
  }
}

TEST_CASE("subsampled rounds still make progress") {
  const Dataset data = noisy_regression(13, 100, 0.3);
  const LossModel loss = LossModel::squared(1.0);
  BaselineConfig config;
  config.subsample = 0.5;
  config.seed = 17;
  const FitReport report = run_gradient_boosting(data, loss, config, 120);
  CHECK(report.records.back().train_risk < report.initial_risk);
}

TEST_CASE("subsample too small to fit a stump") {
  const Dataset data = noisy_regression(15, 10);
  BaselineConfig config;
  config.subsample = 0.1;  // one point
  CHECK_THROWS_AS(run_gradient_boosting(data, LossModel::squared(1.0), config, 5),
                  std::invalid_argument);
}

TEST_CASE("exponential-loss boosting is the classical reweighting method") {
  SynthParams params;
  params.m = 80;
  params.d = 2;
  params.eta = 0.1;
  const Dataset data = generate_synthetic("two-gaussian", params, 23);
  const LossModel loss = LossModel::exponential(1.0);
  BaselineConfig config;
  const FitReport report = run_gradient_boosting(data, loss, config, 40);
  REQUIRE_FALSE(report.records.empty());
  // every step size matches 0.5 log((1-e)/e) for the stump's weighted error
  Vector preds = Vector::Zero(data.rows());
  for (const auto& rec : report.records) {
    const Vector h = report.ensemble.atom(rec.atom_index).evaluate(data.features);
    Vector weights(data.rows());
    for (Index i = 0; i < data.rows(); ++i)
      weights(i) = std::exp(-data.targets(i) * preds(i));
    weights /= weights.sum();
    double err = 0.0;
    for (Index i = 0; i < data.rows(); ++i)
      if (h(i) != data.targets(i)) err += weights(i);
    if (err > 1e-12 && err < 0.5) {
      const double closed_form = 0.5 * std::log((1.0 - err) / err);
      CHECK(oracles::close_rel(rec.step_size, closed_form, 1e-6));
    }
    preds += rec.step_size * h;
  }
}

TEST_CASE("configuration validation") {
  const Dataset data = noisy_regression(1, 20);
  BaselineConfig bad;
  bad.shrinkage = 0.0;
  CHECK_THROWS_AS(run_gradient_boosting(data, LossModel::squared(1.0), bad, 5),
                  std::invalid_argument);
  bad = BaselineConfig{};
  bad.subsample = 1.5;
  CHECK_THROWS_AS(run_gradient_boosting(data, LossModel::squared(1.0), bad, 5),
                  std::invalid_argument);
  bad = BaselineConfig{};
  bad.validation_fraction = 1.0;
  CHECK_THROWS_AS(run_gradient_boosting(data, LossModel::squared(1.0), bad, 5),
                  std::invalid_argument);
}
