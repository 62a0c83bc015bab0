#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qallpair/ledger.hpp"
#include "qallpair/qclassify.hpp"
#include "qallpair/statevector.hpp"

namespace qap {

/// Per-class confidence scores for one-against-all selection.
struct ScoreList {
  Eigen::VectorXd scores;
  Eigen::Index size() const { return scores.size(); }
};

/// Predicted classes of the k(k-1)/2 pair classifiers, lexicographic pair order.
struct VoteList {
  std::vector<int> votes;
  int k = 0;
  Eigen::Index size() const { return static_cast<Eigen::Index>(votes.size()); }
};

struct DurrHoyerResult {
  int index = 0;
  ResourceLedger ledger;
  /// adopted thresholds with cumulative Grover iterations at adoption time
  /// (the initial random threshold is entry 0 at cost 0)
  std::vector<std::pair<int, std::uint64_t>> threshold_history;
};

/// Threshold search for the maximum score: repeated Grover searches for
/// strictly-better entries with exponentially growing iteration guesses,
/// stopping once cumulative Grover iterations exceed
/// budget_multiplier * (22.5 sqrt(k) + 1.4 log2(k)^2).
DurrHoyerResult durr_hoyer_max(const ScoreList& scores, std::uint64_t seed,
                               double budget_multiplier = 1.0);

/// Same threshold process without a budget; runs until `stop(index)` holds.
/// Test instrumentation for the run-to-completion statistics.
DurrHoyerResult durr_hoyer_until(const ScoreList& scores, std::uint64_t seed,
                                 const std::function<bool(int)>& stop);

/// Smallest index attaining the maximum.
int classical_argmax(const ScoreList& scores);

/// Applies the probability table per pair result; results must cover every
/// unordered pair exactly once in lexicographic order.
VoteList store_votes(const std::vector<PairProbability>& pair_results, int k);

/// Uniform superposition over the vote slots (padding slots stay empty).
QState vote_superposition(const VoteList& v);

struct CountConfig {
  int precision_qubits = 9;
};

/// Amplitude estimation of the fraction of vote slots equal to class_id:
/// phase estimation over the Grover operator marking those slots, reading r
/// mapping to sin^2(pi r / 2^t). Exact when the Grover angle is representable.
double quantum_count(const VoteList& v, int class_id, int precision_qubits, std::mt19937_64& rng,
                     ResourceLedger* ledger = nullptr);

struct ModeConfig {
  int precision_qubits = 9;   ///< reading width for the internal counts
  int rounds_per_log2 = 3;    ///< round budget ceil(rounds_per_log2 * log2 k)
};

/// Mode of the vote list by threshold search over estimated class
/// frequencies; a candidate is adopted when its fresh count exceeds the
/// current estimate by eps / (k (k-1)).
int quantum_mode(const VoteList& v, double eps, double delta, std::uint64_t seed,
                 ResourceLedger* ledger = nullptr, const ModeConfig& cfg = {});

/// Smallest class id attaining the maximum vote frequency.
int classical_mode(const VoteList& v);

}  // namespace qap
