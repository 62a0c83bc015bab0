#include "qallpair/qclassify.hpp"

#include <cmath>
#include <stdexcept>

#include "qallpair/rng.hpp"

namespace qap {

namespace {

std::uint64_t bernoulli_count(double p, std::uint64_t shots, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uint64_t ones = 0;
  for (std::uint64_t i = 0; i < shots; ++i) {
    if (unit(rng) < p) ++ones;
  }
  return ones;
}

}  // namespace

NormSumEstimate estimate_norm_sum(const Eigen::VectorXd& xi, const Eigen::VectorXd& xj, double t,
                                  ProbabilityMode mode, int shots, std::uint64_t seed,
                                  ResourceLedger* ledger) {
  if (!(t > 0.0)) throw std::invalid_argument("estimate_norm_sum: t must be positive");
  if (mode == ProbabilityMode::sampled && shots <= 0) {
    throw std::invalid_argument("estimate_norm_sum: shots must be positive in sampled mode");
  }
  const double ni = xi.norm();
  const double nj = xj.norm();

  // H = |x_i| |0><0| (x) sigma_x + |x_j| |1><1| (x) sigma_x  (qubit 1 is the ancilla)
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(4, 4);
  h(0, 1) = ni;
  h(1, 0) = ni;
  h(2, 3) = nj;
  h(3, 2) = nj;

  CVector init = CVector::Zero(4);
  init[0] = 1.0 / std::numbers::sqrt2;
  init[2] = -1.0 / std::numbers::sqrt2;
  const QState evolved = evolve(QState(2, std::move(init)), HermitianOp(h), t);
  const double p1 = probability_of(evolved, 1, 1);

  NormSumEstimate est;
  est.p1 = p1;
  est.t_warning = std::max(ni, nj) * t > 0.2;
  if (mode == ProbabilityMode::exact) {
    est.estimate = 2.0 * p1 / (t * t);
  } else {
    auto rng = make_rng(seed);
    const std::uint64_t ones = bernoulli_count(p1, static_cast<std::uint64_t>(shots), rng);
    if (ledger) ledger->measurement_shots += static_cast<std::uint64_t>(shots);
    est.estimate = 2.0 * (static_cast<double>(ones) / shots) / (t * t);
  }
  return est;
}

TrainingState build_training_state(const LSSVMModel& model) {
  const int m = static_cast<int>(model.alpha.size());
  if (m == 0) throw std::invalid_argument("build_training_state: empty model");
  const int d = static_cast<int>(model.training_x.front().size());

  const int iq = detail::qubits_for(m + 1);
  const int dq = detail::qubits_for(d);
  const Eigen::Index data_dim = Eigen::Index{1} << dq;

  CVector amps = CVector::Zero((Eigen::Index{1} << iq) * data_dim);
  amps[0] = model.b;
  double norm_const = model.b * model.b;
  for (int l = 0; l < m; ++l) {
    const Eigen::VectorXd& x = model.training_x[static_cast<std::size_t>(l)];
    // alpha_l |x_l| times the unit direction is just alpha_l x_l componentwise
    for (int c = 0; c < d; ++c) amps[(l + 1) * data_dim + c] = model.alpha[l] * x[c];
    norm_const += model.alpha[l] * model.alpha[l] * x.squaredNorm();
  }
  if (!(norm_const > 0.0)) {
    throw std::invalid_argument("build_training_state: degenerate model (b and alpha all zero)");
  }
  amps /= std::sqrt(norm_const);

  TrainingState ts{QState(iq + dq, std::move(amps)), norm_const, iq, dq, m, model.f, model.s};
  return ts;
}

QueryState build_query_state(const Eigen::VectorXd& x, int slots, int data_dim) {
  if (x.size() != data_dim) throw std::invalid_argument("build_query_state: dimension mismatch");
  if (x.norm() == 0.0) throw std::invalid_argument("build_query_state: zero query vector");
  if (slots < 0) throw std::invalid_argument("build_query_state: negative slot count");

  const int iq = detail::qubits_for(slots + 1);
  const int dq = detail::qubits_for(data_dim);
  const Eigen::Index ddim = Eigen::Index{1} << dq;

  CVector amps = CVector::Zero((Eigen::Index{1} << iq) * ddim);
  amps[0] = 1.0;
  for (int l = 1; l <= slots; ++l) {
    for (int c = 0; c < data_dim; ++c) amps[l * ddim + c] = x[c];
  }
  const double norm_const = slots * x.squaredNorm() + 1.0;
  amps /= std::sqrt(norm_const);

  return QueryState{QState(iq + dq, std::move(amps)), norm_const, iq, dq, slots};
}

PairProbability pair_probability(const TrainingState& u, const QueryState& x, ProbabilityMode mode,
                                 std::uint64_t shots, std::uint64_t seed, ResourceLedger* ledger) {
  if (u.index_qubits != x.index_qubits || u.data_qubits != x.data_qubits) {
    throw std::invalid_argument("pair_probability: register layout mismatch");
  }
  const Eigen::Index d = u.state.dim();
  CVector joint(2 * d);
  joint.head(d) = u.state.amplitudes() / std::numbers::sqrt2;
  joint.tail(d) = x.state.amplitudes() / std::numbers::sqrt2;

  const QState mixed = apply_gate(QState(1 + u.state.n_qubits(), std::move(joint)),
                                  gates::hadamard(), {0});
  const double p = probability_of(mixed, 0, 1);

  PairProbability out;
  out.f = u.f;
  out.s = u.s;
  if (mode == ProbabilityMode::exact) {
    out.p = p;
    out.shots_used = 0;
  } else {
    if (shots == 0) throw std::invalid_argument("pair_probability: shots must be positive in sampled mode");
    auto rng = make_rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uint64_t ones = 0;
    for (std::uint64_t i = 0; i < shots; ++i) {
      if (unit(rng) < p) ++ones;
    }
    out.p = static_cast<double>(ones) / static_cast<double>(shots);
    out.shots_used = shots;
    if (ledger) ledger->measurement_shots += shots;
  }
  return out;
}

int classify_pair(const PairProbability& p) { return p.p < 0.5 ? p.f : p.s; }

std::uint64_t shots_for_accuracy(double p_hint, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("shots_for_accuracy: eps must be positive");
  const double q = p_hint * (1.0 - p_hint) / (eps * eps);
  const double n = std::ceil(q - 1e-9);
  return std::max<std::uint64_t>(16, n <= 0.0 ? 0 : static_cast<std::uint64_t>(n));
}

}  // namespace qap
