#include <doctest.h>

#include <cmath>

#include "fwboost/rng.hpp"
#include "fwboost/solver.hpp"
#include "fwboost/synthetic.hpp"
#include "oracles.hpp"

using namespace fwboost;

namespace {

Matrix random_features(Rng& rng, Index m, Index d) {
  Matrix x(m, d);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < d; ++j) x(i, j) = rng.uniform();
  return x;
}

// Small sign-symmetric stump set plus targets representable inside the ball.
struct FiniteInstance {
  Dataset data;
  std::vector<Hypothesis> atoms;
  Matrix atom_preds;  // n x m
};

FiniteInstance make_instance(std::uint64_t seed, Index m, double capacity) {
  Rng rng(seed);
  FiniteInstance inst;
  inst.data.task = Task::kRegression;
  inst.data.features = random_features(rng, m, 2);
  for (int k = 0; k < 3; ++k) {
    const int f = static_cast<int>(rng.below(2));
    const double thr = rng.uniform(0.2, 0.8);
    inst.atoms.push_back(Hypothesis::classification_stump(f, thr, 1.0));
    inst.atoms.push_back(Hypothesis::classification_stump(f, thr, -1.0));
  }
  inst.atom_preds.resize(static_cast<Index>(inst.atoms.size()), m);
  for (size_t j = 0; j < inst.atoms.size(); ++j)
    inst.atom_preds.row(static_cast<Index>(j)) =
        inst.atoms[j].evaluate(inst.data.features).transpose();
  // A combination with l1 mass 0.55 * capacity keeps the optimum interior.
  inst.data.targets = 0.3 * capacity * inst.atom_preds.row(0).transpose() +
                      0.15 * capacity * inst.atom_preds.row(2).transpose() -
                      0.1 * capacity * inst.atom_preds.row(4).transpose();
  for (Index i = 0; i < m; ++i) inst.data.targets(i) += 0.02 * rng.normal();
  return inst;
}

}  // namespace

TEST_CASE("step schedule") {
  CHECK(step_schedule(1) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(step_schedule(2) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(step_schedule(998) == doctest::Approx(0.002).epsilon(1e-15));
  CHECK_THROWS_AS(step_schedule(0), std::invalid_argument);
}

TEST_CASE("line search") {
  Rng rng(7);
  const LossModel squared = LossModel::squared(1.0);
  SUBCASE("flat objective returns zero") {
    const Vector preds = Vector::Zero(4);
    const Vector y = Vector::Constant(4, 0.3);
    CHECK(line_search(squared, preds, Vector::Zero(4), y, 1e-10) == 0.0);
  }
  SUBCASE("matches the quadratic closed form") {
    for (int trial = 0; trial < 50; ++trial) {
      const Index m = 6;
      Vector preds(m), direction(m), y(m);
      for (Index i = 0; i < m; ++i) {
        preds(i) = rng.uniform(-1.0, 1.0);
        direction(i) = rng.uniform(-2.0, 2.0);
        y(i) = rng.uniform(-1.0, 1.0);
      }
      const double found = line_search(squared, preds, direction, y, 1e-10);
      const double exact = oracles::quadratic_line_search_closed_form(preds, direction, y);
      CHECK(std::abs(found - exact) <= 1e-9);
    }
  }
  SUBCASE("beats a dense grid for the exponential loss") {
    const LossModel expo = LossModel::exponential(1.0);
    const Index m = 10;
    Vector preds(m), direction(m), y(m);
    for (Index i = 0; i < m; ++i) {
      preds(i) = rng.uniform(-0.5, 0.5);
      direction(i) = rng.uniform(-1.5, 1.5);
      y(i) = rng.sign();
    }
    const double found = line_search(expo, preds, direction, y, 1e-10);
    const double at_found = empirical_risk(expo, preds + found * direction, y);
    for (int k = 0; k <= 10000; ++k) {
      const double g = static_cast<double>(k) / 10000.0;
      CHECK(at_found <= empirical_risk(expo, preds + g * direction, y) + 1e-12);
    }
  }
  SUBCASE("non-finite directions are rejected") {
    Vector direction = Vector::Zero(3);
    direction(1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(
        line_search(squared, Vector::Zero(3), direction, Vector::Zero(3), 1e-10),
        std::invalid_argument);
  }
}

TEST_CASE("classification reduction") {
  SUBCASE("worked example") {
    Vector r(3);
    r << 0.5, -0.25, 0.25;
    const Reduction red = reduce_to_classification(r);
    CHECK(red.labels(0) == 1.0);
    CHECK(red.labels(1) == -1.0);
    CHECK(red.labels(2) == 1.0);
    CHECK(red.weights(0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(red.weights(1) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(red.weights(2) == doctest::Approx(0.25).epsilon(1e-15));
  }
  SUBCASE("degenerate mass") {
    Vector r = Vector::Zero(4);
    r(2) = -0.3;
    const Reduction red = reduce_to_classification(r);
    CHECK(red.weights(2) == 1.0);
    CHECK(red.weights(0) == 0.0);
    CHECK(red.labels(2) == -1.0);
    CHECK(red.labels(0) == 1.0);  // sign(0) is +1 by convention
  }
  SUBCASE("random vectors produce a distribution") {
    Rng rng(3);
    for (int trial = 0; trial < 30; ++trial) {
      Vector r(8);
      for (Index i = 0; i < 8; ++i) r(i) = rng.uniform(-1.0, 1.0);
      const Reduction red = reduce_to_classification(r);
      double sum = 0.0;
      for (Index i = 0; i < 8; ++i) {
        CHECK(red.weights(i) >= 0.0);
        CHECK(std::abs(red.labels(i)) == 1.0);
        sum += red.weights(i);
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  SUBCASE("zero residual throws") {
    CHECK_THROWS_AS(reduce_to_classification(Vector::Zero(3)), std::invalid_argument);
  }
}

TEST_CASE("l-infinity rescaling") {
  Matrix x(2, 1);
  x << 0.0, 1.0;
  SUBCASE("unit-norm input is unchanged and the vertex scales by capacity") {
    const Hypothesis h = Hypothesis::regression_stump(0, 0.5, 0.5, -1.0);
    const ScaledHypothesis scaled = scale_to_linf_ball(h, x);
    CHECK_FALSE(scaled.zero);
    CHECK(scaled.scale == doctest::Approx(1.0).epsilon(1e-15));
    const Vector vertex = 2.0 * scaled.hypothesis.evaluate(x);
    CHECK(vertex(0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(vertex(1) == doctest::Approx(-2.0).epsilon(1e-15));
  }
  SUBCASE("zero hypothesis signals termination") {
    CHECK(scale_to_linf_ball(Hypothesis::constant(0.0), x).zero);
  }
  SUBCASE("random stumps scale to norm exactly one") {
    Rng rng(12);
    const Matrix xr = random_features(rng, 8, 2);
    for (int trial = 0; trial < 20; ++trial) {
      const Hypothesis h = Hypothesis::regression_stump(
          static_cast<int>(rng.below(2)), rng.uniform(), rng.uniform(-3.0, 3.0),
          rng.uniform(-3.0, 3.0));
      const ScaledHypothesis scaled = scale_to_linf_ball(h, xr);
      double norm = 0.0;
      for (Index i = 0; i < xr.rows(); ++i)
        norm = std::max(norm, std::abs(oracles::eval_one(scaled.hypothesis, xr, i)));
      CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("gap certificate on a finite-atom instance") {
  const FiniteInstance inst = make_instance(301, 8, 1.0);
  const LossModel loss = LossModel::squared(1.0);
  const auto oracle =
      oracles::long_run_fw(inst.atom_preds, inst.data.targets, loss, 1.0, 1000000);
  REQUIRE(oracle.final_gap <= 1e-9);

  SUBCASE("identical points give a zero gap") {
    Vector v = Vector::Constant(4, 0.3);
    CHECK(fw_gap(Vector::Constant(4, 0.1), v, v) == 0.0);
  }
  SUBCASE("solver reaches a tiny gap with line search") {
    FitOptions opt;
    opt.capacity = 1.0;
    opt.iterations = 100000;
    opt.policy = StepPolicy::line_search();
    opt.gap_tolerance = 1e-6;
    const FitReport report = run_fwboost(inst.data, loss,
                                         make_oracle_subproblem(inst.atoms, inst.data.features),
                                         opt);
    CHECK(report.termination == TerminationReason::kGapBelowTolerance);
  }
  SUBCASE("gap dominates the true suboptimality along a run") {
    FitOptions opt;
    opt.capacity = 1.0;
    opt.iterations = 60;
    opt.policy = StepPolicy::schedule();
    opt.gap_tolerance = 0.0;
    const FitReport report = run_fwboost(inst.data, loss,
                                         make_oracle_subproblem(inst.atoms, inst.data.features),
                                         opt);
    double previous_risk = report.initial_risk;
    for (const auto& rec : report.records) {
      CHECK(rec.gap >= previous_risk - oracle.risk - 1e-12);
      previous_risk = rec.train_risk;
    }
  }
}

TEST_CASE("generic solver basics") {
  const FiniteInstance inst = make_instance(302, 8, 1.0);
  const LossModel loss = LossModel::squared(1.0);
  SUBCASE("one scheduled step puts 2/3 of the capacity on the first atom") {
    FitOptions opt;
    opt.capacity = 1.0;
    opt.iterations = 1;
    const FitReport report = run_fwboost(inst.data, loss,
                                         make_oracle_subproblem(inst.atoms, inst.data.features),
                                         opt);
    REQUIRE(report.records.size() == 1);
    CHECK(report.ensemble.coefficient(0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  }
  SUBCASE("line search never increases the risk") {
    FitOptions opt;
    opt.capacity = 1.0;
    opt.iterations = 200;
    opt.policy = StepPolicy::line_search();
    const FitReport report = run_fwboost(inst.data, loss,
                                         make_oracle_subproblem(inst.atoms, inst.data.features),
                                         opt);
    double previous = report.initial_risk;
    for (const auto& rec : report.records) {
      CHECK(rec.train_risk <= previous + 1e-12);
      previous = rec.train_risk;
    }
  }
  SUBCASE("suboptimality stays under the scheduled-rate envelope") {
    const auto oracle =
        oracles::long_run_fw(inst.atom_preds, inst.data.targets, loss, 1.0, 1000000);
    FitOptions opt;
    opt.capacity = 1.0;
    opt.iterations = 500;
    opt.gap_tolerance = 0.0;
    const FitReport report = run_fwboost(inst.data, loss,
                                         make_oracle_subproblem(inst.atoms, inst.data.features),
                                         opt);
    const double constant =
        std::max(smoothness_constant(loss) / 2.0, 0.75 * report.initial_risk);
    for (const auto& rec : report.records)
      CHECK(rec.train_risk - oracle.risk <=
            constant / (2.0 + static_cast<double>(rec.iteration)) + 1e-12);
  }
}

TEST_CASE("classification-reduction solver") {
  SUBCASE("separable toy reaches zero training error") {
    SynthParams params;
    params.m = 60;
    params.d = 2;
    const Dataset data = generate_synthetic("separable", params, 5);
    FitOptions opt;
    opt.capacity = 2.0;
    opt.iterations = 200;
    opt.policy = StepPolicy::line_search();
    const LossModel loss = LossModel::exponential(2.0);
    const FitReport report = run_fwboost_c(data, loss, opt);
    const Vector preds = predict(report.ensemble, data);
    int wrong = 0;
    for (Index i = 0; i < data.rows(); ++i)
      if ((preds(i) >= 0.0 ? 1.0 : -1.0) != data.targets(i)) ++wrong;
    CHECK(wrong == 0);
  }
  SUBCASE("an all-zero residual terminates as a zero direction") {
    Dataset data;
    data.task = Task::kRegression;
    data.features = Matrix::Random(5, 1);
    data.targets = Vector::Zero(5);
    FitOptions opt;
    opt.capacity = 1.0;
    opt.iterations = 10;
    const FitReport report = run_fwboost_c(data, LossModel::squared(1.0), opt);
    CHECK(report.termination == TerminationReason::kZeroDirection);
    CHECK(report.records.empty());
  }
}

TEST_CASE("regression-reduction solver") {
  SUBCASE("zero targets never move") {
    Dataset data;
    data.task = Task::kRegression;
    data.features = Matrix::Random(6, 1);
    data.targets = Vector::Zero(6);
    FitOptions opt;
    opt.capacity = 1.0;
    opt.iterations = 50;
    const FitReport report = run_fwboost_r(data, LossModel::squared(1.0), opt);
    CHECK(report.termination == TerminationReason::kZeroDirection);
    CHECK(predict(report.ensemble, data).isZero(0.0));
  }
  SUBCASE("a single-stump target is fitted to high accuracy") {
    Rng rng(9);
    Dataset data;
    data.task = Task::kRegression;
    data.features = random_features(rng, 40, 1);
    data.targets.resize(40);
    for (Index i = 0; i < 40; ++i)
      data.targets(i) = data.features(i, 0) > 0.5 ? 1.0 : -1.0;
    FitOptions opt;
    opt.capacity = 2.0;
    opt.iterations = 2000;
    opt.policy = StepPolicy::line_search();
    opt.gap_tolerance = 0.0;
    const FitReport report = run_fwboost_r(data, LossModel::squared(2.0), opt);
    const double final_risk = report.records.empty() ? report.initial_risk
                                                     : report.records.back().train_risk;
    CHECK(final_risk <= 1e-3);
    for (const auto& rec : report.records)
      CHECK(rec.coefficient_norm <= 2.0 + kFeasibilityTolerance);
  }
}

TEST_CASE("away-step solver") {
  const FiniteInstance inst = make_instance(303, 10, 1.0);
  const LossModel loss = LossModel::squared(1.0);
  FitOptions opt;
  opt.capacity = 1.0;
  opt.iterations = 500;
  opt.policy = StepPolicy::line_search();
  opt.gap_tolerance = 1e-12;
  const FitReport report = run_awaystep(inst.data, loss, inst.atoms, opt);

  SUBCASE("the first step is always a Frank-Wolfe step") {
    REQUIRE_FALSE(report.records.empty());
    CHECK(report.records.front().step == StepKind::kFrankWolfe);
  }
  SUBCASE("drops remove exactly one active atom and stay feasible") {
    int previous_active = 0;
    for (const auto& rec : report.records) {
      if (rec.step == StepKind::kDrop) CHECK(rec.active_set_size == previous_active - 1);
      CHECK(rec.coefficient_norm <= 1.0 + kFeasibilityTolerance);
      previous_active = rec.active_set_size;
    }
    CHECK(report.ensemble.coefficient_norm_exact() <= 1.0 + kFeasibilityTolerance);
  }
  SUBCASE("beats the scheduled solver on the same instance") {
    FitOptions plain = opt;
    plain.policy = StepPolicy::schedule();
    plain.gap_tolerance = 0.0;
    const FitReport baseline = run_fwboost(
        inst.data, loss, make_oracle_subproblem(inst.atoms, inst.data.features), plain);
    const double away_risk =
        report.records.empty() ? report.initial_risk : report.records.back().train_risk;
    const double plain_risk =
        baseline.records.empty() ? baseline.initial_risk : baseline.records.back().train_risk;
    CHECK(away_risk <= plain_risk + 1e-12);
  }
  SUBCASE("empty atom lists are rejected") {
    CHECK_THROWS_AS(run_awaystep(inst.data, loss, {}, opt), std::invalid_argument);
  }
}

TEST_CASE("replay reproduces the recorded run") {
  const FiniteInstance inst = make_instance(304, 8, 1.0);
  const LossModel loss = LossModel::squared(1.0);
  FitOptions opt;
  opt.capacity = 1.0;
  opt.iterations = 40;
  opt.policy = StepPolicy::line_search();
  const FitReport report = run_awaystep(inst.data, loss, inst.atoms, opt);
  Vector last;
  int visited = 0;
  replay_predictions(report, inst.data.features, [&](int, const Vector& preds) {
    last = preds;
    ++visited;
  });
  REQUIRE(visited == static_cast<int>(report.records.size()));
  const Vector direct = predict(report.ensemble, inst.data);
  for (Index i = 0; i < direct.size(); ++i)
    CHECK(oracles::close_rel(last(i), direct(i), 1e-9));
  CHECK(empirical_risk(loss, last, inst.data.targets) ==
        doctest::Approx(report.records.back().train_risk).epsilon(1e-12));
}
