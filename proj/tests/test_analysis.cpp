#include <doctest.h>

#include <cmath>

#include "fwboost/analysis.hpp"
#include "fwboost/rng.hpp"
#include "fwboost/stumps.hpp"
#include "oracles.hpp"

using namespace fwboost;

namespace {

Matrix random_features(Rng& rng, Index m, Index d) {
  Matrix x(m, d);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < d; ++j) x(i, j) = rng.uniform();
  return x;
}

std::vector<Hypothesis> symmetric_stumps(Rng& rng, int pairs, int dims) {
  std::vector<Hypothesis> atoms;
  for (int k = 0; k < pairs; ++k) {
    const int f = static_cast<int>(rng.below(dims));
    const double thr = rng.uniform(0.2, 0.8);
    atoms.push_back(Hypothesis::classification_stump(f, thr, 1.0));
    atoms.push_back(Hypothesis::classification_stump(f, thr, -1.0));
  }
  return atoms;
}

}  // namespace

TEST_CASE("singleton class has vanishing complexity in exact mode") {
  Rng rng(2);
  Matrix values(1, 6);
  for (Index i = 0; i < 6; ++i) values(0, i) = rng.uniform(-1.0, 1.0);
  const RademacherEstimate est = rademacher_of_predictions(values, 0, 0, SigmaMode::kExact);
  CHECK(std::abs(est.estimate) <= 1e-13);
  CHECK(est.draws == 64);
  CHECK(est.std_error == 0.0);
}

TEST_CASE("pair {h, -h} of constants enumerates to E|mean sigma|") {
  Matrix values(2, 4);
  values.row(0) = Vector::Constant(4, 1.0).transpose();
  values.row(1) = Vector::Constant(4, -1.0).transpose();
  const RademacherEstimate est = rademacher_of_predictions(values, 0, 0, SigmaMode::kExact);
  // E|mean(sigma)| over all 16 sign vectors: (2*1*1 + 8*0.5 + 6*0) / 16
  CHECK(est.estimate == doctest::Approx(0.375).epsilon(1e-15));
  CHECK(est.estimate == doctest::Approx(oracles::exact_rademacher_naive(values)).epsilon(1e-15));
}

TEST_CASE("exact mode matches the naive enumeration on random classes") {
  Rng rng(44);
  const Matrix x = random_features(rng, 8, 2);
  const std::vector<Hypothesis> atoms = symmetric_stumps(rng, 3, 2);
  const RademacherEstimate est = estimate_rademacher(atoms, x, 0, 0, SigmaMode::kExact);
  Matrix values(static_cast<Index>(atoms.size()), 8);
  for (size_t j = 0; j < atoms.size(); ++j)
    values.row(static_cast<Index>(j)) = atoms[j].evaluate(x).transpose();
  CHECK(est.estimate == doctest::Approx(oracles::exact_rademacher_naive(values)).epsilon(1e-13));
}

TEST_CASE("scaling the class scales the complexity exactly") {
  Rng rng(8);
  Matrix values(3, 6);
  for (Index g = 0; g < 3; ++g)
    for (Index i = 0; i < 6; ++i) values(g, i) = rng.uniform(-1.0, 1.0);
  const RademacherEstimate base = rademacher_of_predictions(values, 0, 0, SigmaMode::kExact);
  const RademacherEstimate scaled =
      rademacher_of_predictions(Matrix(2.0 * values), 0, 0, SigmaMode::kExact);
  CHECK(scaled.estimate == 2.0 * base.estimate);
}

TEST_CASE("monte carlo agrees with exact enumeration within sampling error") {
  Rng rng(10);
  const Matrix x = random_features(rng, 10, 2);
  const std::vector<Hypothesis> atoms = symmetric_stumps(rng, 3, 2);
  const RademacherEstimate exact = estimate_rademacher(atoms, x, 0, 0, SigmaMode::kExact);
  const RademacherEstimate mc =
      estimate_rademacher(atoms, x, 20000, 1234, SigmaMode::kMonteCarlo);
  CHECK(std::abs(mc.estimate - exact.estimate) <= 3.0 * mc.std_error);
  CHECK(mc.std_error > 0.0);
}

TEST_CASE("combined class stays below the scaled base complexity") {
  Rng rng(21);
  SUBCASE("single-term grid at the vertices is exact") {
    const Matrix x = random_features(rng, 8, 2);
    const std::vector<Hypothesis> base = symmetric_stumps(rng, 2, 2);
    const CombinedClassCheck check =
        check_combined_class_bound(base, 2.0, 1, x, 0, 0, 3, SigmaMode::kExact);
    CHECK(check.combined.estimate == check.scaled_base.estimate);
  }
  SUBCASE("two-term grids respect the inequality") {
    const Matrix x = random_features(rng, 8, 2);
    const std::vector<Hypothesis> base = symmetric_stumps(rng, 2, 2);
    const CombinedClassCheck check =
        check_combined_class_bound(base, 2.0, 2, x, 0, 0, 9, SigmaMode::kExact);
    CHECK(check.combined.estimate <=
          check.scaled_base.estimate + 3.0 * (check.combined.std_error +
                                              check.scaled_base.std_error) + 1e-12);
  }
  SUBCASE("doubling the capacity doubles the right-hand side") {
    const Matrix x = random_features(rng, 6, 2);
    const std::vector<Hypothesis> base = symmetric_stumps(rng, 2, 2);
    const CombinedClassCheck one =
        check_combined_class_bound(base, 1.0, 1, x, 0, 0, 3, SigmaMode::kExact);
    const CombinedClassCheck two =
        check_combined_class_bound(base, 2.0, 1, x, 0, 0, 3, SigmaMode::kExact);
    CHECK(two.scaled_base.estimate == 2.0 * one.scaled_base.estimate);
  }
  SUBCASE("a too-coarse grid is rejected") {
    const Matrix x = random_features(rng, 6, 2);
    const std::vector<Hypothesis> base = symmetric_stumps(rng, 1, 2);
    CHECK_THROWS_AS(check_combined_class_bound(base, 1.0, 1, x, 0, 0, 2, SigmaMode::kExact),
                    std::invalid_argument);
  }
}

TEST_CASE("generalization bound formula") {
  SUBCASE("degenerate constants return the empirical risk") {
    CHECK(generalization_bound(0.37, 1.0, 0.0, 0.0, 0.05, 100) == 0.37);
  }
  SUBCASE("worked example") {
    const double expected = 0.1 + 2.0 * 1.0 * 0.05 +
                            3.0 * 1.0 * std::sqrt(std::log(2.0 / 0.05) / (2.0 * 200.0));
    CHECK(generalization_bound(0.1, 1.0, 1.0, 0.05, 0.05, 200) ==
          doctest::Approx(expected).epsilon(1e-15));
  }
  SUBCASE("doubling the sample shrinks the deviation term by sqrt(2)") {
    const double base = generalization_bound(0.0, 0.0, 1.0, 0.0, 0.1, 50);
    const double doubled = generalization_bound(0.0, 0.0, 1.0, 0.0, 0.1, 100);
    CHECK(doubled == doctest::Approx(base / std::sqrt(2.0)).epsilon(1e-14));
  }
  SUBCASE("delta range is enforced") {
    CHECK_THROWS_AS(generalization_bound(0.1, 1, 1, 0.1, 0.0, 10), std::invalid_argument);
    CHECK_THROWS_AS(generalization_bound(0.1, 1, 1, 0.1, 1.0, 10), std::invalid_argument);
  }
}

TEST_CASE("suboptimality envelope") {
  const LossModel loss = LossModel::squared(1.0);
  SUBCASE("worked example at t = 2") {
    const std::vector<double> curve = convergence_bound_curve(loss, 1.0, 5, 0.0);
    CHECK(curve[1] == doctest::Approx(0.5).epsilon(1e-15));  // max(2, 0.75) / 4
  }
  SUBCASE("zero tolerance leaves the curve unchanged") {
    const std::vector<double> a = convergence_bound_curve(loss, 0.3, 10, 0.0);
    const std::vector<double> b = convergence_bound_curve(loss, 0.3, 10, 0.25);
    for (size_t t = 0; t < a.size(); ++t)
      CHECK(b[t] == doctest::Approx(a[t] * 1.5).epsilon(1e-14));
  }
  SUBCASE("strictly decreasing") {
    const std::vector<double> curve = convergence_bound_curve(loss, 1.0, 50, 0.1);
    for (size_t t = 1; t < curve.size(); ++t) CHECK(curve[t] < curve[t - 1]);
  }
}
