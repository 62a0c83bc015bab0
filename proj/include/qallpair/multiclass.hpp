#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qallpair/dataset.hpp"
#include "qallpair/ledger.hpp"
#include "qallpair/lssvm.hpp"
#include "qallpair/qclassify.hpp"
#include "qallpair/qtrain.hpp"
#include "qallpair/selection.hpp"

namespace qap {

enum class TrainingMode { classical, quantum };
enum class ModeFinder { classical, quantum };

struct TrainConfig {
  double gamma = 1.0;
  KernelSpec kernel;
  TrainingMode mode = TrainingMode::classical;
  InversionConfig inversion;
  std::uint64_t seed = 0;
};

/// Per-classifier diagnostics from quantum training.
struct PairTrainingInfo {
  int f = 0;
  int s = 0;
  double success_probability = 1.0;
  std::uint64_t postselect_attempts = 0;
  double gauge_residual = 0.0;  ///< |sum alpha| / max(1, |alpha|)
};

struct AllPairEnsemble {
  int k = 0;
  int d = 0;
  TrainingMode mode = TrainingMode::classical;
  KernelSpec kernel;
  double gamma = 1.0;
  bool normalized_features = false;  ///< inputs were unit-normalized before training
  std::vector<LSSVMModel> models;  ///< lexicographic pair order
  std::vector<PairTrainingInfo> training_info;
  ResourceLedger training_ledger;
};

struct OneVsAllEnsemble {
  int k = 0;
  int d = 0;
  TrainingMode mode = TrainingMode::classical;
  KernelSpec kernel;
  double gamma = 1.0;
  bool normalized_features = false;  ///< inputs were unit-normalized before training
  std::vector<LSSVMModel> models;  ///< class 1..k vs rest
  std::vector<PairTrainingInfo> training_info;
  ResourceLedger training_ledger;
};

struct PredictConfig {
  ProbabilityMode probability_mode = ProbabilityMode::exact;
  std::uint64_t shots = 0;       ///< 0 in sampled mode derives shots_for_accuracy(1/2, shot_eps)
  double shot_eps = 0.01;
  ModeFinder mode_finder = ModeFinder::classical;
  double mode_eps = 0.1;
  double mode_delta = 0.1;
  int count_precision_qubits = 9;
  double budget_multiplier = 1.0;  ///< one-vs-all max-finding budget scale
};

struct PredictionTrace {
  std::vector<PairProbability> pair_probabilities;
  VoteList votes;          ///< all-pair path
  Eigen::VectorXd scores;  ///< one-vs-all path
  int chosen = 0;
  bool low_margin = false;  ///< some pair probability within 0.05 of 1/2
  ResourceLedger ledger;
};

struct Evaluation {
  double accuracy = 0.0;
  Eigen::MatrixXi confusion;  ///< rows true class, columns predicted
  ResourceLedger ledger;
};

AllPairEnsemble train_all_pair(const Dataset& ds, const TrainConfig& cfg);
OneVsAllEnsemble train_one_vs_all(const Dataset& ds, const TrainConfig& cfg);

std::pair<int, PredictionTrace> predict_all_pair(const AllPairEnsemble& ens, const Eigen::VectorXd& x,
                                                 const PredictConfig& cfg, std::uint64_t seed);
std::pair<int, PredictionTrace> predict_one_vs_all(const OneVsAllEnsemble& ens,
                                                   const Eigen::VectorXd& x, const PredictConfig& cfg,
                                                   std::uint64_t seed);

Evaluation evaluate(const AllPairEnsemble& ens, const Dataset& test, const PredictConfig& cfg,
                    std::uint64_t seed);
Evaluation evaluate(const OneVsAllEnsemble& ens, const Dataset& test, const PredictConfig& cfg,
                    std::uint64_t seed);

/// Shots used per swap test under the given config.
std::uint64_t effective_shots(const PredictConfig& cfg);

}  // namespace qap
