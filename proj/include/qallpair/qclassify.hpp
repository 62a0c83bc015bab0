#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "qallpair/ledger.hpp"
#include "qallpair/lssvm.hpp"
#include "qallpair/statevector.hpp"

namespace qap {

enum class ProbabilityMode { exact, sampled };

/// Composite training-data state over index (x) data registers. Slot 0 holds
/// the offset b on |0...0>, slot l holds alpha_l |x_l| with x_l / |x_l|
/// amplitude-encoded in the data register. norm_const is
/// b^2 + sum_l alpha_l^2 |x_l|^2.
struct TrainingState {
  QState state;
  double norm_const = 0.0;
  int index_qubits = 0;
  int data_qubits = 0;
  int slots = 0;  ///< training example count M
  int f = 0;
  int s = 0;
};

/// Query state with the same register layout: slot 0 holds amplitude 1, every
/// other slot holds |x| times the encoded query direction.
/// norm_const is M |x|^2 + 1.
struct QueryState {
  QState state;
  double norm_const = 0.0;
  int index_qubits = 0;
  int data_qubits = 0;
  int slots = 0;
};

struct PairProbability {
  int f = 0;
  int s = 0;
  double p = 0.0;
  std::uint64_t shots_used = 0;  ///< 0 = exact mode
};

struct NormSumEstimate {
  double estimate = 0.0;      ///< small-angle inversion 2 p1 / t^2
  double p1 = 0.0;            ///< exact ancilla-1 probability from the simulation
  bool t_warning = false;     ///< max(|x_i|, |x_j|) * t exceeded 0.2
};

/// Norm-estimation subroutine: evolve (|0> - |1>)/sqrt(2) (x) |0> under
/// H = |x_i| |0><0| (x) sigma_x + |x_j| |1><1| (x) sigma_x for time t and read
/// the ancilla. The ancilla-1 probability is (sin^2(|x_i| t) + sin^2(|x_j| t)) / 2;
/// 2 p1 / t^2 estimates |x_i|^2 + |x_j|^2 with O(t^2) bias.
NormSumEstimate estimate_norm_sum(const Eigen::VectorXd& xi, const Eigen::VectorXd& xj, double t,
                                  ProbabilityMode mode, int shots, std::uint64_t seed,
                                  ResourceLedger* ledger = nullptr);

TrainingState build_training_state(const LSSVMModel& model);

QueryState build_query_state(const Eigen::VectorXd& x, int slots, int data_dim);

/// Swap-test probability P = (1 - Re<u|x>)/2 via the ancilla-Hadamard circuit
/// on (|0>|u> + |1>|x>)/sqrt(2). Sampled mode draws Bernoulli shots.
PairProbability pair_probability(const TrainingState& u, const QueryState& x, ProbabilityMode mode,
                                 std::uint64_t shots, std::uint64_t seed,
                                 ResourceLedger* ledger = nullptr);

/// Table rule: f when p < 1/2, s when p >= 1/2.
int classify_pair(const PairProbability& p);

/// max(16, ceil(p (1-p) / eps^2)) shots for additive accuracy eps.
std::uint64_t shots_for_accuracy(double p_hint, double eps);

}  // namespace qap
