// Command-line front end: train/evaluate single models, run the experiment
// protocol, tune hyperparameters, estimate complexity bounds, and emit the
// bundled synthetic datasets.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>

#include "fwboost/adaboost_fw.hpp"
#include "fwboost/analysis.hpp"
#include "fwboost/baselines.hpp"
#include "fwboost/data_io.hpp"
#include "fwboost/experiment.hpp"
#include "fwboost/rng.hpp"
#include "fwboost/solver.hpp"
#include "fwboost/synthetic.hpp"

namespace {

using namespace fwboost;

LossKind parse_loss(const std::string& text, double& p) {
  if (text == "squared") return LossKind::kSquared;
  if (text == "exponential") return LossKind::kExponential;
  if (text == "logistic") return LossKind::kLogistic;
  if (text.rfind("lp:", 0) == 0) {
    p = std::stod(text.substr(3));
    return LossKind::kLp;
  }
  throw CLI::ValidationError("--loss", "expected squared, lp:<p>, exponential or logistic");
}

StepPolicyKind parse_step(const std::string& text) {
  if (text == "schedule") return StepPolicyKind::kSchedule;
  if (text == "linesearch") return StepPolicyKind::kLineSearch;
  throw CLI::ValidationError("--step", "expected schedule or linesearch");
}

struct LearnerFlag {
  bool oracle = false;
  std::string atoms_path;
};

LearnerFlag parse_learner(const std::string& text) {
  LearnerFlag out;
  if (text == "stump") return out;
  if (text.rfind("oracle:", 0) == 0) {
    out.oracle = true;
    out.atoms_path = text.substr(7);
    if (out.atoms_path.empty()) throw CLI::ValidationError("--learner", "oracle:<atoms-file>");
    return out;
  }
  throw CLI::ValidationError("--learner", "expected stump or oracle:<atoms-file>");
}

void write_records_jsonl(const FitReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  for (const auto& rec : report.records) {
    nlohmann::json line{
        {"t", rec.iteration},
        {"train_risk", rec.train_risk},
        {"coefficient_norm", rec.coefficient_norm},
        {"active_set", rec.active_set_size},
        {"step_size", rec.step_size},
        {"step", to_string(rec.step)},
    };
    if (std::isnan(rec.gap))
      line["gap"] = nullptr;
    else
      line["gap"] = rec.gap;
    out << line.dump() << "\n";
  }
}

ExperimentConfig parse_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  nlohmann::json doc;
  in >> doc;

  ExperimentConfig config;
  const auto& data = doc.at("data");
  if (data.contains("csv")) {
    config.csv_path = data.at("csv").get<std::string>();
  } else {
    const auto& synth = data.at("synthetic");
    config.synth_name = synth.at("name").get<std::string>();
    config.synth.m = synth.value("m", config.synth.m);
    config.synth.d = synth.value("d", config.synth.d);
    config.synth.noise = synth.value("noise", config.synth.noise);
    config.synth.eta = synth.value("eta", config.synth.eta);
    config.synth.separation = synth.value("separation", config.synth.separation);
  }
  config.repeats = doc.value("repeats", config.repeats);
  config.train_fraction = doc.value("train_fraction", config.train_fraction);
  config.folds = doc.value("folds", config.folds);
  config.iterations = doc.value("iterations", config.iterations);
  config.seed = doc.value("seed", config.seed);
  config.output_dir = doc.value("output", std::string());

  // Task is needed for per-algorithm defaults; peek at the data source.
  const Dataset probe = config.csv_path.empty()
                            ? generate_synthetic(config.synth_name, config.synth,
                                                 derive_seed(config.seed, "data"))
                            : load_csv(config.csv_path);

  for (const auto& item : doc.at("algorithms")) {
    AlgoSpec spec = AlgoSpec::defaults(item.at("algo").get<std::string>(), probe.task);
    if (item.contains("loss")) spec.loss = parse_loss(item.at("loss").get<std::string>(), spec.lp_exponent);
    if (item.contains("step")) spec.step = parse_step(item.at("step").get<std::string>());
    if (item.contains("gap_tol")) spec.gap_tolerance = item.at("gap_tol").get<double>();
    if (item.contains("val_frac")) spec.validation_fraction = item.at("val_frac").get<double>();
    if (item.contains("atoms")) spec.atoms = load_atoms(item.at("atoms").get<std::string>());
    if (item.contains("oracle_learner")) spec.oracle_learner = item.at("oracle_learner").get<bool>();
    const auto grid_of = [&](const char* key, auto setter) {
      if (!item.contains(key)) return;
      spec.grid.clear();
      for (const auto& v : item.at(key)) {
        HyperPoint h;
        setter(h, v);
        spec.grid.push_back(h);
      }
    };
    grid_of("capacity_grid", [](HyperPoint& h, const nlohmann::json& v) { h.capacity = v.get<double>(); });
    grid_of("shrinkage_grid", [](HyperPoint& h, const nlohmann::json& v) { h.shrinkage = v.get<double>(); });
    grid_of("subsample_grid", [](HyperPoint& h, const nlohmann::json& v) { h.subsample = v.get<double>(); });
    grid_of("patience_grid", [](HyperPoint& h, const nlohmann::json& v) { h.patience = v.get<int>(); });
    config.algorithms.push_back(std::move(spec));
  }
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"l1-constrained functional boosting toolkit"};
  app.require_subcommand(1);

  // ---- synth ----
  auto* synth = app.add_subcommand("synth", "generate a bundled synthetic dataset as CSV");
  std::string synth_name = "step", synth_out = "data.csv";
  SynthParams synth_params;
  std::uint64_t synth_seed = 0;
  synth->add_option("--name", synth_name, "step | two-gaussian | separable");
  synth->add_option("--m", synth_params.m, "sample count");
  synth->add_option("--d", synth_params.d, "feature count");
  synth->add_option("--noise", synth_params.noise, "gaussian noise level (step)");
  synth->add_option("--eta", synth_params.eta, "label flip rate (two-gaussian)");
  synth->add_option("--sep", synth_params.separation, "class separation (two-gaussian)");
  synth->add_option("--seed", synth_seed, "rng seed");
  synth->add_option("--out", synth_out, "output CSV path")->required();

  // ---- train ----
  auto* train = app.add_subcommand("train", "fit a single model");
  std::string train_data, train_algo = "fwboost-r", train_loss, train_step, train_learner = "stump";
  std::string model_out, records_out;
  double train_capacity = 1.0, train_gap_tol = 1e-8, train_shrinkage = 1.0, train_subsample = 1.0;
  double train_val_frac = 0.2;
  int train_iters = 100, train_patience = 0;
  std::uint64_t train_seed = 0;
  train->add_option("--data", train_data, "training CSV")->required();
  train->add_option("--algo", train_algo,
                    "fwboost-c | fwboost-r | awaystep | adaboost-fw | gb | gb-shrink | gb-sub | gb-early");
  train->add_option("--loss", train_loss, "squared | lp:<p> | exponential | logistic");
  train->add_option("--capacity", train_capacity, "l1 budget C");
  train->add_option("--iters", train_iters, "boosting rounds");
  train->add_option("--step", train_step, "schedule | linesearch");
  train->add_option("--gap-tol", train_gap_tol, "stop when the gap certificate falls below this");
  train->add_option("--seed", train_seed, "rng seed");
  train->add_option("--learner", train_learner, "stump | oracle:<atoms-file>");
  train->add_option("--shrinkage", train_shrinkage, "gb shrinkage factor");
  train->add_option("--subsample", train_subsample, "gb subsample fraction");
  train->add_option("--patience", train_patience, "gb early-stopping patience (0 = off)");
  train->add_option("--val-frac", train_val_frac, "gb early-stopping validation fraction");
  train->add_option("--model-out", model_out, "write the fitted model as JSON");
  train->add_option("--records-out", records_out, "write per-iteration records as JSON lines");

  // ---- evaluate ----
  auto* evaluate = app.add_subcommand("evaluate", "evaluate a saved model on a CSV");
  std::string eval_data, eval_model;
  evaluate->add_option("--data", eval_data, "evaluation CSV")->required();
  evaluate->add_option("--model", eval_model, "model JSON")->required();

  // ---- tune ----
  auto* tune = app.add_subcommand("tune", "cross-validate the default grid for an algorithm");
  std::string tune_data, tune_algo = "fwboost-r", tune_loss, tune_step;
  int tune_folds = 5, tune_iters = 100;
  std::uint64_t tune_seed = 0;
  tune->add_option("--data", tune_data, "training CSV")->required();
  tune->add_option("--algo", tune_algo, "algorithm name");
  tune->add_option("--loss", tune_loss, "loss override");
  tune->add_option("--step", tune_step, "step policy override");
  tune->add_option("--folds", tune_folds, "cross-validation folds");
  tune->add_option("--iters", tune_iters, "boosting rounds");
  tune->add_option("--seed", tune_seed, "rng seed");

  // ---- experiment ----
  auto* experiment = app.add_subcommand("experiment", "run the repeated split/tune/fit protocol");
  std::string experiment_config;
  experiment->add_option("--config", experiment_config, "experiment config JSON")->required();

  // ---- analyze ----
  auto* analyze = app.add_subcommand("analyze", "estimate complexity and risk bounds as JSON");
  std::string analyze_data, analyze_atoms, analyze_model, analyze_loss = "squared";
  double analyze_capacity = 1.0, analyze_delta = 0.05, analyze_tolerance = 0.0;
  long long analyze_draws = 20000;
  int analyze_horizon = 50;
  std::uint64_t analyze_seed = 0;
  bool analyze_seed_set = false;
  analyze->add_option("--data", analyze_data, "CSV with the sample")->required();
  analyze->add_option("--loss", analyze_loss, "loss for the constants");
  analyze->add_option("--capacity", analyze_capacity, "l1 budget C");
  analyze->add_option("--delta", analyze_delta, "confidence level in (0,1)");
  analyze->add_option("--draws", analyze_draws, "sigma draws (exact enumeration for m <= 12)");
  analyze->add_option("--seed", analyze_seed, "rng seed")->each([&](const std::string&) {
    analyze_seed_set = true;
  });
  analyze->add_option("--atoms", analyze_atoms, "analyze this atoms file instead of all stumps");
  analyze->add_option("--model", analyze_model, "model JSON for the empirical-risk term");
  analyze->add_option("--horizon", analyze_horizon, "length of the suboptimality envelope");
  analyze->add_option("--tolerance", analyze_tolerance, "subproblem tolerance level delta");

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed()) {
      const Dataset data = generate_synthetic(synth_name, synth_params, synth_seed);
      save_csv(data, synth_out);
      std::cout << "wrote " << data.rows() << " rows to " << synth_out << "\n";
      return 0;
    }

    if (train->parsed()) {
      const Dataset data = load_csv(train_data);
      AlgoSpec spec = AlgoSpec::defaults(train_algo, data.task);
      if (!train_loss.empty()) spec.loss = parse_loss(train_loss, spec.lp_exponent);
      if (!train_step.empty()) spec.step = parse_step(train_step);
      spec.gap_tolerance = train_gap_tol;
      spec.validation_fraction = train_val_frac;
      const LearnerFlag learner = parse_learner(train_learner);
      if (learner.oracle) {
        spec.oracle_learner = true;
        spec.atoms = load_atoms(learner.atoms_path);
      }
      if (train_algo == "awaystep" && spec.atoms.empty())
        throw std::runtime_error("--algo awaystep needs --learner oracle:<atoms-file>");

      HyperPoint hyper;
      hyper.capacity = train_capacity;
      if (train->count("--shrinkage")) hyper.shrinkage = train_shrinkage;
      if (train->count("--subsample")) hyper.subsample = train_subsample;
      if (train->count("--patience")) hyper.patience = train_patience;

      const FitReport report = fit_algorithm(data, spec, hyper, train_iters, train_seed);
      if (!model_out.empty()) save_model(report.ensemble, data.task, model_out);
      if (!records_out.empty()) write_records_jsonl(report, records_out);

      const Vector preds = predict(report.ensemble, data);
      nlohmann::json out{
          {"algo", train_algo},
          {"rounds", report.records.size()},
          {"termination", to_string(report.termination)},
          {"initial_risk", report.initial_risk},
          {"final_risk", report.records.empty() ? report.initial_risk
                                                : report.records.back().train_risk},
          {"train_metric",
           evaluate_metric(task_metric(data.task), preds, data.targets)},
          {"coefficient_norm", report.ensemble.coefficient_norm()},
          {"active_atoms", report.ensemble.active_set().size()},
      };
      std::cout << out.dump(2) << "\n";
      return 0;
    }

    if (evaluate->parsed()) {
      const Dataset data = load_csv(eval_data);
      const LoadedModel model = load_model(eval_model);
      const Vector preds = predict(model.ensemble, data);
      const Metric metric = task_metric(model.task);
      nlohmann::json out{
          {"rows", data.rows()},
          {"metric", metric == Metric::kZeroOneError ? "zero-one" : "mse"},
          {"value", evaluate_metric(metric, preds, data.targets)},
      };
      std::cout << out.dump(2) << "\n";
      return 0;
    }

    if (tune->parsed()) {
      const Dataset data = load_csv(tune_data);
      AlgoSpec spec = AlgoSpec::defaults(tune_algo, data.task);
      if (!tune_loss.empty()) spec.loss = parse_loss(tune_loss, spec.lp_exponent);
      if (!tune_step.empty()) spec.step = parse_step(tune_step);
      const HyperPoint best = cross_validate(data, spec, tune_folds, tune_iters, tune_seed);
      nlohmann::json out{{"algo", tune_algo}, {"chosen", best.describe()}};
      if (best.capacity) out["capacity"] = *best.capacity;
      if (best.shrinkage) out["shrinkage"] = *best.shrinkage;
      if (best.subsample) out["subsample"] = *best.subsample;
      if (best.patience) out["patience"] = *best.patience;
      std::cout << out.dump(2) << "\n";
      return 0;
    }

    if (experiment->parsed()) {
      const ExperimentConfig config = parse_experiment_config(experiment_config);
      const ExperimentResult result = run_experiment(config);
      std::cout << "completed " << result.completed_repeats << " repeats";
      if (!config.output_dir.empty()) std::cout << "; outputs in " << config.output_dir;
      std::cout << "\n";
      return 0;
    }

    if (analyze->parsed()) {
      if (!analyze_seed_set)
        throw std::runtime_error("analyze needs an explicit --seed for reproducibility");
      const Dataset data = load_csv(analyze_data);
      double lp_exponent = 2.0;
      const LossKind kind = parse_loss(analyze_loss, lp_exponent);
      LossModel loss{kind, lp_exponent, analyze_capacity};

      const std::vector<Hypothesis> atoms = analyze_atoms.empty()
                                                ? enumerate_classification_stumps(data.features)
                                                : load_atoms(analyze_atoms);
      const RademacherEstimate rad =
          estimate_rademacher(atoms, data.features, analyze_draws, analyze_seed);

      const double target_bound = data.targets.cwiseAbs().maxCoeff();
      const LipschitzBound lb = lipschitz_and_bound(loss, target_bound);

      nlohmann::json out{
          {"class_size", atoms.size()},
          {"capacity", analyze_capacity},
          {"rademacher", {{"estimate", rad.estimate}, {"std_error", rad.std_error}, {"draws", rad.draws}}},
          {"combined_class_bound", analyze_capacity * rad.estimate},
          {"lipschitz", lb.lipschitz},
          {"loss_bound", lb.bound},
          {"smoothness", smoothness_constant(loss)},
          {"delta", analyze_delta},
      };

      if (!analyze_model.empty()) {
        const LoadedModel model = load_model(analyze_model);
        const Vector preds = predict(model.ensemble, data);
        const double risk = empirical_risk(loss, preds, data.targets);
        out["empirical_risk"] = risk;
        out["generalization_bound"] =
            generalization_bound(risk, lb.lipschitz, lb.bound,
                                 analyze_capacity * rad.estimate, analyze_delta,
                                 static_cast<int>(data.rows()));
      }

      const double initial_risk =
          empirical_risk(loss, Vector::Zero(data.rows()), data.targets);
      out["suboptimality_envelope"] =
          convergence_bound_curve(loss, initial_risk, analyze_horizon, analyze_tolerance);
      std::cout << out.dump(2) << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
