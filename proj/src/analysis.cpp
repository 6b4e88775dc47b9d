#include "fwboost/analysis.hpp"

#include <cmath>

#include "fwboost/rng.hpp"

namespace fwboost {

namespace {

double sup_over_rows(const Matrix& values, const Vector& sigma) {
  return (values * sigma).maxCoeff() / static_cast<double>(sigma.size());
}

RademacherEstimate exact_estimate(const Matrix& values) {
  const Index m = values.cols();
  if (m > 20) throw std::invalid_argument("exact sigma enumeration limited to m <= 20");
  const std::uint64_t count = 1ull << m;
  Vector sigma(m);
  double sum = 0.0;
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    for (Index i = 0; i < m; ++i) sigma(i) = (mask >> i) & 1u ? 1.0 : -1.0;
    sum += sup_over_rows(values, sigma);
  }
  return {sum / static_cast<double>(count), 0.0, static_cast<long long>(count)};
}

RademacherEstimate monte_carlo_estimate(const Matrix& values, long long draws,
                                        std::uint64_t seed) {
  if (draws < 1) throw std::invalid_argument("need at least one sigma draw");
  Rng rng(seed);
  const Index m = values.cols();
  Vector sigma(m);
  double sum = 0.0, sum_sq = 0.0;
  for (long long k = 0; k < draws; ++k) {
    for (Index i = 0; i < m; ++i) sigma(i) = rng.sign();
    const double sup = sup_over_rows(values, sigma);
    sum += sup;
    sum_sq += sup * sup;
  }
  const double mean = sum / static_cast<double>(draws);
  double se = 0.0;
  if (draws > 1) {
    const double var = (sum_sq - static_cast<double>(draws) * mean * mean) /
                       static_cast<double>(draws - 1);
    se = std::sqrt(std::max(0.0, var) / static_cast<double>(draws));
  }
  return {mean, se, draws};
}

}  // namespace

RademacherEstimate rademacher_of_predictions(const Matrix& values, long long draws,
                                             std::uint64_t seed, SigmaMode mode) {
  if (values.rows() < 1) throw std::invalid_argument("need a nonempty function class");
  if (mode == SigmaMode::kExact || (mode == SigmaMode::kAuto && values.cols() <= 12))
    return exact_estimate(values);
  return monte_carlo_estimate(values, draws, seed);
}

RademacherEstimate estimate_rademacher(const std::vector<Hypothesis>& hypotheses, const Matrix& x,
                                       long long draws, std::uint64_t seed, SigmaMode mode) {
  if (hypotheses.empty()) throw std::invalid_argument("need a nonempty hypothesis list");
  Matrix values(static_cast<Index>(hypotheses.size()), x.rows());
  for (size_t j = 0; j < hypotheses.size(); ++j)
    values.row(static_cast<Index>(j)) = hypotheses[j].evaluate(x).transpose();
  return rademacher_of_predictions(values, draws, seed, mode);
}

namespace {

// Emits every coefficient vector on the per-coordinate grid with l1 norm
// within the budget, for one subset of base rows.
void emit_grid_rows(const Matrix& base_values, const std::vector<int>& subset,
                    const std::vector<double>& axis, double budget, size_t position,
                    std::vector<double>& coeffs, const Vector& partial,
                    std::vector<Vector>& out) {
  if (position == subset.size()) {
    out.push_back(partial);
    return;
  }
  for (double a : axis) {
    double used = std::abs(a);
    for (size_t k = 0; k < position; ++k) used += std::abs(coeffs[k]);
    if (used > budget + 1e-12) continue;
    coeffs[position] = a;
    emit_grid_rows(base_values, subset, axis, budget, position + 1, coeffs,
                   partial + a * base_values.row(subset[position]).transpose(), out);
  }
  coeffs[position] = 0.0;
}

}  // namespace

CombinedClassCheck check_combined_class_bound(const std::vector<Hypothesis>& base, double capacity,
                                              int terms, const Matrix& x, long long draws,
                                              std::uint64_t seed, int grid_points_per_axis,
                                              SigmaMode mode) {
  if (base.empty()) throw std::invalid_argument("need a nonempty base class");
  if (terms < 1) throw std::invalid_argument("need at least one term");
  if (!(capacity > 0.0)) throw std::invalid_argument("capacity must be positive");
  if (grid_points_per_axis < 3 || grid_points_per_axis % 2 == 0)
    throw std::invalid_argument("coefficient grid needs an odd resolution of at least 3");

  Matrix base_values(static_cast<Index>(base.size()), x.rows());
  for (size_t j = 0; j < base.size(); ++j)
    base_values.row(static_cast<Index>(j)) = base[j].evaluate(x).transpose();

  std::vector<double> axis(static_cast<size_t>(grid_points_per_axis));
  for (int i = 0; i < grid_points_per_axis; ++i) {
    // Symmetric grid through 0 with the +-capacity vertices exact.
    const int half = grid_points_per_axis / 2;
    axis[static_cast<size_t>(i)] = capacity * static_cast<double>(i - half) /
                                   static_cast<double>(half);
  }

  const int width = std::min<int>(terms, static_cast<int>(base.size()));
  std::vector<Vector> rows;
  std::vector<int> subset(static_cast<size_t>(width));
  std::vector<double> coeffs(static_cast<size_t>(width), 0.0);
  // Iterate all strictly increasing index subsets of the given width.
  const int n = static_cast<int>(base.size());
  std::vector<int> idx(static_cast<size_t>(width));
  for (int i = 0; i < width; ++i) idx[static_cast<size_t>(i)] = i;
  while (true) {
    for (int i = 0; i < width; ++i) subset[static_cast<size_t>(i)] = idx[static_cast<size_t>(i)];
    emit_grid_rows(base_values, subset, axis, capacity, 0, coeffs, Vector::Zero(x.rows()), rows);
    int pos = width - 1;
    while (pos >= 0 && idx[static_cast<size_t>(pos)] == n - width + pos) --pos;
    if (pos < 0) break;
    ++idx[static_cast<size_t>(pos)];
    for (int i = pos + 1; i < width; ++i)
      idx[static_cast<size_t>(i)] = idx[static_cast<size_t>(i - 1)] + 1;
  }

  Matrix combined(static_cast<Index>(rows.size()), x.rows());
  for (size_t r = 0; r < rows.size(); ++r) combined.row(static_cast<Index>(r)) = rows[r].transpose();

  CombinedClassCheck out;
  out.combined = rademacher_of_predictions(combined, draws, derive_seed(seed, "combined"), mode);
  RademacherEstimate base_est =
      rademacher_of_predictions(base_values, draws, derive_seed(seed, "base"), mode);
  out.scaled_base = {capacity * base_est.estimate, capacity * base_est.std_error, base_est.draws};
  return out;
}

double generalization_bound(double empirical_risk, double lipschitz, double loss_bound,
                            double rademacher, double delta, int sample_size) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0,1)");
  if (sample_size < 1) throw std::invalid_argument("sample size must be at least 1");
  return empirical_risk + 2.0 * lipschitz * rademacher +
         3.0 * loss_bound * std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(sample_size)));
}

std::vector<double> convergence_bound_curve(const LossModel& loss, double initial_risk,
                                            int iterations, double delta) {
  if (iterations < 1) throw std::invalid_argument("need at least one iteration");
  if (delta < 0.0) throw std::invalid_argument("tolerance level must be nonnegative");
  const double constant =
      std::max(smoothness_constant(loss) / 2.0, 3.0 * initial_risk / 4.0);
  std::vector<double> curve(static_cast<size_t>(iterations));
  for (int t = 1; t <= iterations; ++t)
    curve[static_cast<size_t>(t - 1)] =
        constant / (2.0 + static_cast<double>(t)) * (1.0 + 2.0 * delta);
  return curve;
}

}  // namespace fwboost
