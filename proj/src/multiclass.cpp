#include "qallpair/multiclass.hpp"

#include <cmath>
#include <stdexcept>

#include "qallpair/rng.hpp"

namespace qap {

namespace {

// Quantum-trained models come out of the solver as a direction only; the
// scale (and sign) is recovered by least squares against the non-gauge rows
// (K + gamma^-1 I) alpha + b 1 = y.
LSSVMModel quantum_train_binary(const GramMatrix& K, const Eigen::VectorXd& y, double gamma,
                                const InversionConfig& inversion, PairTrainingInfo& info,
                                ResourceLedger& ledger) {
  const Eigen::Index m = K.size();
  const FHat fhat = build_fhat(K, gamma);
  const QuantumSolveResult solved = quantum_solve(fhat, y, inversion, &ledger);

  Eigen::VectorXd direction(m + 1);
  for (Eigen::Index i = 0; i <= m; ++i) direction[i] = solved.solution.amp(i).real();

  const Eigen::MatrixXd a = K.entries + Eigen::MatrixXd::Identity(m, m) / gamma;
  const Eigen::VectorXd fitted = a * direction.tail(m) + direction[0] * Eigen::VectorXd::Ones(m);
  const double denom = fitted.squaredNorm();
  if (!(denom > 0.0)) throw std::runtime_error("quantum training produced a degenerate solution");
  const double scale = fitted.dot(y) / denom;

  LSSVMModel model;
  model.b = scale * direction[0];
  model.alpha = scale * direction.tail(m);
  model.gamma = gamma;
  model.binary_y = y;

  info.success_probability = solved.success_probability;
  info.postselect_attempts = solved.postselect_attempts;
  info.gauge_residual = std::abs(model.alpha.sum()) / std::max(1.0, model.alpha.norm());
  return model;
}

void check_quantum_feasible(const TrainConfig& cfg, Eigen::Index m) {
  if (cfg.kernel.kind != KernelSpec::Kind::linear) {
    throw std::invalid_argument("kernel unsupported in quantum path (linear only)");
  }
  const int sol_qubits = detail::qubits_for(m + 1);
  if (cfg.inversion.precision_qubits + sol_qubits + 1 > kMaxQubits) {
    throw std::invalid_argument(
        "pair subset too large for quantum training: M+1 = " + std::to_string(m + 1) +
        " needs more than the " + std::to_string(kMaxQubits) + "-qubit register cap");
  }
}

}  // namespace

std::uint64_t effective_shots(const PredictConfig& cfg) {
  if (cfg.probability_mode == ProbabilityMode::exact) return 0;
  return cfg.shots > 0 ? cfg.shots : shots_for_accuracy(0.5, cfg.shot_eps);
}

AllPairEnsemble train_all_pair(const Dataset& ds, const TrainConfig& cfg) {
  AllPairEnsemble ens;
  ens.k = ds.k;
  ens.d = ds.d;
  ens.mode = cfg.mode;
  ens.kernel = cfg.kernel;
  ens.gamma = cfg.gamma;

  for (const PairSubset& subset : pair_subsets(ds)) {
    PairTrainingInfo info;
    info.f = subset.f;
    info.s = subset.s;
    if (cfg.mode == TrainingMode::classical) {
      ens.models.push_back(train_pair_model(subset, cfg.kernel, cfg.gamma));
    } else {
      check_quantum_feasible(cfg, static_cast<Eigen::Index>(subset.size()));
      LSSVMModel model = quantum_train_binary(gram_matrix(subset, cfg.kernel), subset.binary_labels,
                                              cfg.gamma, cfg.inversion, info, ens.training_ledger);
      model.kernel = cfg.kernel;
      model.f = subset.f;
      model.s = subset.s;
      for (const auto& ex : subset.examples) model.training_x.push_back(ex.features);
      ens.models.push_back(std::move(model));
    }
    ens.training_info.push_back(info);
  }
  return ens;
}

OneVsAllEnsemble train_one_vs_all(const Dataset& ds, const TrainConfig& cfg) {
  OneVsAllEnsemble ens;
  ens.k = ds.k;
  ens.d = ds.d;
  ens.mode = cfg.mode;
  ens.kernel = cfg.kernel;
  ens.gamma = cfg.gamma;

  const Eigen::Index m = static_cast<Eigen::Index>(ds.size());
  const GramMatrix gram = gram_matrix(ds.examples, cfg.kernel);
  for (int cls = 1; cls <= ds.k; ++cls) {
    Eigen::VectorXd y(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      y[i] = ds.examples[static_cast<std::size_t>(i)].label == cls ? 1.0 : -1.0;
    }
    PairTrainingInfo info;
    info.f = cls;
    info.s = 0;
    LSSVMModel model;
    if (cfg.mode == TrainingMode::classical) {
      model = solve_lssvm(gram, y, cfg.gamma);
    } else {
      check_quantum_feasible(cfg, m);
      model = quantum_train_binary(gram, y, cfg.gamma, cfg.inversion, info, ens.training_ledger);
    }
    model.kernel = cfg.kernel;
    model.f = cls;
    model.s = 0;
    model.training_x.reserve(ds.size());
    for (const auto& ex : ds.examples) model.training_x.push_back(ex.features);
    ens.models.push_back(std::move(model));
    ens.training_info.push_back(info);
  }
  return ens;
}

std::pair<int, PredictionTrace> predict_all_pair(const AllPairEnsemble& ens, const Eigen::VectorXd& x,
                                                 const PredictConfig& cfg, std::uint64_t seed) {
  if (x.size() != ens.d) throw std::invalid_argument("predict: query dimension mismatch");
  PredictionTrace trace;
  const std::uint64_t shots = effective_shots(cfg);

  std::uint64_t pair_index = 0;
  for (const LSSVMModel& model : ens.models) {
    const TrainingState u = build_training_state(model);
    const QueryState q = build_query_state(x, static_cast<int>(model.alpha.size()), ens.d);
    const PairProbability p =
        pair_probability(u, q, cfg.probability_mode, shots, derive_seed(seed, pair_index), &trace.ledger);
    if (std::abs(p.p - 0.5) < 0.05) trace.low_margin = true;
    trace.pair_probabilities.push_back(p);
    ++pair_index;
  }
  trace.votes = store_votes(trace.pair_probabilities, ens.k);

  if (ens.k == 2) {
    trace.chosen = trace.votes.votes.front();
  } else if (cfg.mode_finder == ModeFinder::quantum) {
    ModeConfig mode_cfg;
    mode_cfg.precision_qubits = cfg.count_precision_qubits;
    trace.chosen = quantum_mode(trace.votes, cfg.mode_eps, cfg.mode_delta,
                                derive_seed(seed, 0x6d0deULL), &trace.ledger, mode_cfg);
  } else {
    trace.chosen = classical_mode(trace.votes);
  }
  return {trace.chosen, std::move(trace)};
}

std::pair<int, PredictionTrace> predict_one_vs_all(const OneVsAllEnsemble& ens,
                                                   const Eigen::VectorXd& x, const PredictConfig& cfg,
                                                   std::uint64_t seed) {
  if (x.size() != ens.d) throw std::invalid_argument("predict: query dimension mismatch");
  PredictionTrace trace;
  const std::uint64_t shots = effective_shots(cfg);

  trace.scores.resize(ens.k);
  std::uint64_t class_index = 0;
  for (const LSSVMModel& model : ens.models) {
    const TrainingState u = build_training_state(model);
    const QueryState q = build_query_state(x, static_cast<int>(model.alpha.size()), ens.d);
    const PairProbability p =
        pair_probability(u, q, cfg.probability_mode, shots, derive_seed(seed, class_index), &trace.ledger);
    if (std::abs(p.p - 0.5) < 0.05) trace.low_margin = true;
    trace.pair_probabilities.push_back(p);
    trace.scores[static_cast<Eigen::Index>(class_index)] = 1.0 - p.p;  // confidence of "class f wins"
    ++class_index;
  }

  if (cfg.mode_finder == ModeFinder::quantum) {
    DurrHoyerResult found =
        durr_hoyer_max(ScoreList{trace.scores}, derive_seed(seed, 0xa59a11ULL), cfg.budget_multiplier);
    trace.ledger += found.ledger;
    trace.chosen = found.index + 1;
  } else {
    trace.chosen = classical_argmax(ScoreList{trace.scores}) + 1;
  }
  return {trace.chosen, std::move(trace)};
}

namespace {

template <typename Ensemble, typename Predictor>
Evaluation evaluate_impl(const Ensemble& ens, const Dataset& test, const PredictConfig& cfg,
                         std::uint64_t seed, Predictor&& predict_one) {
  if (test.size() == 0) throw std::invalid_argument("evaluate: empty test set");
  if (test.d != ens.d) throw std::invalid_argument("evaluate: dimension mismatch");

  Evaluation ev;
  ev.confusion = Eigen::MatrixXi::Zero(ens.k, ens.k);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < test.size(); ++i) {
    const auto& ex = test.examples[i];
    auto [predicted, trace] = predict_one(ex.features, derive_seed(seed, 1000003ULL + i));
    ev.ledger += trace.ledger;
    if (ex.label >= 1 && ex.label <= ens.k) {
      ev.confusion(ex.label - 1, predicted - 1) += 1;
    }
    if (predicted == ex.label) ++correct;
  }
  ev.accuracy = static_cast<double>(correct) / static_cast<double>(test.size());
  return ev;
}

}  // namespace

Evaluation evaluate(const AllPairEnsemble& ens, const Dataset& test, const PredictConfig& cfg,
                    std::uint64_t seed) {
  return evaluate_impl(ens, test, cfg, seed, [&](const Eigen::VectorXd& x, std::uint64_t s) {
    return predict_all_pair(ens, x, cfg, s);
  });
}

Evaluation evaluate(const OneVsAllEnsemble& ens, const Dataset& test, const PredictConfig& cfg,
                    std::uint64_t seed) {
  return evaluate_impl(ens, test, cfg, seed, [&](const Eigen::VectorXd& x, std::uint64_t s) {
    return predict_one_vs_all(ens, x, cfg, s);
  });
}

}  // namespace qap
