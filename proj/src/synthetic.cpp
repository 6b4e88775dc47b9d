#include "fwboost/synthetic.hpp"

#include "fwboost/rng.hpp"

namespace fwboost {

namespace {

double step_signal(double x) {
  if (x < 1.0 / 3.0) return -1.0;
  if (x < 2.0 / 3.0) return 0.5;
  return 1.0;
}

}  // namespace

Dataset generate_synthetic(const std::string& name, const SynthParams& params,
                           std::uint64_t seed) {
  if (params.m < 1) throw std::invalid_argument("need at least one sample");
  Rng rng(derive_seed(seed, "synthetic:" + name));
  Dataset data;

  if (name == "step") {
    data.task = Task::kRegression;
    data.features.resize(params.m, 1);
    data.targets.resize(params.m);
    for (int i = 0; i < params.m; ++i) {
      const double x = rng.uniform();
      data.features(i, 0) = x;
      data.targets(i) = step_signal(x) + params.noise * rng.normal();
    }
  } else if (name == "two-gaussian") {
    if (params.d < 1) throw std::invalid_argument("need at least one feature");
    if (!(params.eta >= 0.0 && params.eta < 1.0))
      throw std::invalid_argument("label noise rate must lie in [0,1)");
    data.task = Task::kClassification;
    data.features.resize(params.m, params.d);
    data.targets.resize(params.m);
    for (int i = 0; i < params.m; ++i) {
      const double label = rng.sign();
      data.features(i, 0) = label * params.separation / 2.0 + rng.normal();
      for (int j = 1; j < params.d; ++j) data.features(i, j) = rng.normal();
      const bool flip = rng.uniform() < params.eta;
      data.targets(i) = flip ? -label : label;
    }
  } else if (name == "separable") {
    if (params.d < 1) throw std::invalid_argument("need at least one feature");
    data.task = Task::kClassification;
    data.features.resize(params.m, params.d);
    data.targets.resize(params.m);
    for (int i = 0; i < params.m; ++i) {
      for (int j = 0; j < params.d; ++j) data.features(i, j) = rng.uniform();
      data.targets(i) = data.features(i, 0) > 0.5 ? 1.0 : -1.0;
    }
  } else {
    throw std::invalid_argument("unknown synthetic generator '" + name + "'");
  }
  data.validate();
  return data;
}

}  // namespace fwboost
