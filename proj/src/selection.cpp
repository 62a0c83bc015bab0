#include "qallpair/selection.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "qallpair/rng.hpp"

namespace qap {

namespace {

constexpr double kGuessGrowth = 1.2;  // classic lambda = 6/5 schedule

struct ThresholdSearch {
  const Eigen::VectorXd& scores;
  Eigen::Index k;
  QState uniform;
  std::mt19937_64 rng;
  ResourceLedger ledger;
  std::vector<std::pair<int, std::uint64_t>> history;
  int index;
  double guess_bound = 1.0;

  ThresholdSearch(const ScoreList& s, std::uint64_t seed)
      : scores(s.scores), k(s.size()), uniform(uniform_superposition(std::max<Eigen::Index>(k, 1))),
        rng(make_rng(seed)) {
    std::uniform_int_distribution<Eigen::Index> pick(0, k - 1);
    index = static_cast<int>(pick(rng));
    history.emplace_back(index, 0);
  }

  // One Grover attempt against the current threshold. Returns iterations used.
  std::uint64_t attempt() {
    std::uniform_int_distribution<int> pick_j(0, static_cast<int>(guess_bound));
    const int j = pick_j(rng);
    const double threshold = scores[index];
    const QState rotated = grover_iterate(
        uniform, [&](Eigen::Index r) { return scores[r] > threshold; }, j, k, &ledger);
    const Eigen::Index candidate = sample_index(rotated, rng);
    ledger.measurement_shots += 1;
    if (scores[candidate] > threshold) {
      index = static_cast<int>(candidate);
      guess_bound = 1.0;
      history.emplace_back(index, ledger.grover_iterations);
    } else {
      guess_bound = std::min(guess_bound * kGuessGrowth, std::sqrt(static_cast<double>(k)));
    }
    return static_cast<std::uint64_t>(j);
  }
};

}  // namespace

DurrHoyerResult durr_hoyer_max(const ScoreList& scores, std::uint64_t seed, double budget_multiplier) {
  const Eigen::Index k = scores.size();
  if (k < 1) throw std::invalid_argument("durr_hoyer_max: empty score list");
  if (!scores.scores.allFinite()) throw std::invalid_argument("durr_hoyer_max: non-finite score");
  if (k == 1) return DurrHoyerResult{0, {}, {{0, 0}}};

  const double kd = static_cast<double>(k);
  const double log2k = std::log2(kd);
  const double budget = budget_multiplier * (22.5 * std::sqrt(kd) + 1.4 * log2k * log2k);

  ThresholdSearch search(scores, seed);
  while (static_cast<double>(search.ledger.grover_iterations) < budget) {
    search.attempt();
  }
  return DurrHoyerResult{search.index, search.ledger, std::move(search.history)};
}

DurrHoyerResult durr_hoyer_until(const ScoreList& scores, std::uint64_t seed,
                                 const std::function<bool(int)>& stop) {
  const Eigen::Index k = scores.size();
  if (k < 1) throw std::invalid_argument("durr_hoyer_until: empty score list");
  if (k == 1) return DurrHoyerResult{0, {}, {{0, 0}}};

  ThresholdSearch search(scores, seed);
  while (!stop(search.index)) {
    search.attempt();
  }
  return DurrHoyerResult{search.index, search.ledger, std::move(search.history)};
}

int classical_argmax(const ScoreList& scores) {
  if (scores.size() < 1) throw std::invalid_argument("classical_argmax: empty score list");
  Eigen::Index best = 0;
  scores.scores.maxCoeff(&best);
  // maxCoeff returns the first maximum, i.e. the smallest index
  return static_cast<int>(best);
}

VoteList store_votes(const std::vector<PairProbability>& pair_results, int k) {
  const std::size_t expected = static_cast<std::size_t>(k) * (k - 1) / 2;
  if (pair_results.size() != expected) {
    throw std::invalid_argument("store_votes: expected one result per unordered pair");
  }
  VoteList v;
  v.k = k;
  v.votes.reserve(expected);
  std::size_t i = 0;
  for (int f = 1; f <= k; ++f) {
    for (int s = f + 1; s <= k; ++s, ++i) {
      const PairProbability& p = pair_results[i];
      if (p.f != f || p.s != s) {
        throw std::invalid_argument("store_votes: missing or duplicate pair result at position " +
                                    std::to_string(i));
      }
      v.votes.push_back(classify_pair(p));
    }
  }
  return v;
}

QState vote_superposition(const VoteList& v) {
  if (v.votes.empty()) throw std::invalid_argument("vote_superposition: empty vote list");
  return uniform_superposition(v.size());
}

double quantum_count(const VoteList& v, int class_id, int precision_qubits, std::mt19937_64& rng,
                     ResourceLedger* ledger) {
  if (v.votes.empty()) throw std::invalid_argument("quantum_count: empty vote list");
  if (class_id < 1 || class_id > v.k) throw std::invalid_argument("quantum_count: class id out of range");
  if (precision_qubits < 1 || precision_qubits > 14) {
    throw std::invalid_argument("quantum_count: precision_qubits out of range");
  }

  const Eigen::Index n = v.size();
  const QState s = vote_superposition(v);
  std::vector<char> mask(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    mask[static_cast<std::size_t>(i)] = v.votes[static_cast<std::size_t>(i)] == class_id ? 1 : 0;
  }
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));

  // one Grover operator application: phase oracle, then reflection about |s>
  auto apply_grover = [&](CVector& vec) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (mask[static_cast<std::size_t>(i)]) vec[i] = -vec[i];
    }
    Complex overlap = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) overlap += vec[i];
    overlap *= inv_sqrt_n;
    for (Eigen::Index i = 0; i < vec.size(); ++i) {
      const Complex proj = i < n ? 2.0 * overlap * inv_sqrt_n : Complex(0.0);
      vec[i] = proj - vec[i];
    }
  };

  const int t = precision_qubits;
  const Eigen::VectorXd dist = detail::qpe_distribution(apply_grover, s.amplitudes(), t);
  const Eigen::Index T = Eigen::Index{1} << t;
  if (ledger) {
    ledger->qpe_qubits_used += static_cast<std::uint64_t>(t);
    ledger->grover_iterations += static_cast<std::uint64_t>(T - 1);
    ledger->oracle_queries += static_cast<std::uint64_t>(T - 1);
    ledger->measurement_shots += 1;
  }

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double u = unit(rng);
  double acc = 0.0;
  Eigen::Index reading = T - 1;
  for (Eigen::Index y = 0; y < T; ++y) {
    acc += dist[y];
    if (u < acc) {
      reading = y;
      break;
    }
  }
  const double angle = std::numbers::pi * static_cast<double>(reading) / static_cast<double>(T);
  const double sin_v = std::sin(angle);
  return sin_v * sin_v;
}

int quantum_mode(const VoteList& v, double eps, double delta, std::uint64_t seed,
                 ResourceLedger* ledger, const ModeConfig& cfg) {
  if (v.votes.empty()) throw std::invalid_argument("quantum_mode: empty vote list");
  if (!(eps > 0.0) || eps >= 1.0) throw std::invalid_argument("quantum_mode: eps must be in (0, 1)");
  if (!(delta > 0.0) || delta >= 1.0) throw std::invalid_argument("quantum_mode: delta must be in (0, 1)");

  const Eigen::Index n = v.size();
  const int k = v.k;
  ResourceLedger local;
  ResourceLedger* led = ledger ? ledger : &local;
  auto rng = make_rng(seed);

  const double margin = eps / (static_cast<double>(k) * (k - 1));
  const int rounds = std::max(1, static_cast<int>(std::ceil(
                                     cfg.rounds_per_log2 * std::log2(static_cast<double>(std::max(k, 2))))));

  std::uniform_int_distribution<Eigen::Index> pick_slot(0, n - 1);
  int candidate = v.votes[static_cast<std::size_t>(pick_slot(rng))];
  double estimate = quantum_count(v, candidate, cfg.precision_qubits, rng, led);

  const QState s = vote_superposition(v);
  double guess_bound = 1.0;
  for (int round = 0; round < rounds; ++round) {
    // per-round frequency estimates, one count per distinct class
    std::map<int, double> freq;
    for (int cls : v.votes) {
      if (!freq.count(cls)) freq[cls] = quantum_count(v, cls, cfg.precision_qubits, rng, led);
    }
    auto marked = [&](Eigen::Index slot) {
      return freq.at(v.votes[static_cast<std::size_t>(slot)]) > estimate + margin;
    };
    std::uniform_int_distribution<int> pick_j(0, static_cast<int>(guess_bound));
    const int j = pick_j(rng);
    const QState rotated = grover_iterate(s, marked, j, n, led);
    const Eigen::Index slot = sample_index(rotated, rng);
    led->measurement_shots += 1;

    const int new_candidate = v.votes[static_cast<std::size_t>(slot)];
    const double recount = quantum_count(v, new_candidate, cfg.precision_qubits, rng, led);
    if (recount > estimate + margin) {
      candidate = new_candidate;
      estimate = recount;
      guess_bound = 1.0;
    } else {
      guess_bound = std::min(guess_bound * kGuessGrowth, std::sqrt(static_cast<double>(n)));
    }
  }
  return candidate;
}

int classical_mode(const VoteList& v) {
  if (v.votes.empty()) throw std::invalid_argument("classical_mode: empty vote list");
  std::map<int, int> counts;
  for (int cls : v.votes) counts[cls]++;
  int best = v.votes.front();
  int best_count = 0;
  for (const auto& [cls, count] : counts) {
    if (count > best_count) {  // map iterates in class order, so ties keep the smallest id
      best = cls;
      best_count = count;
    }
  }
  return best;
}

}  // namespace qap
