#include <doctest.h>

#include <cmath>
#include <random>

#include "qallpair/qtrain.hpp"
#include "support.hpp"

using namespace qap;

namespace {

// Rejection-samples LS-SVM instances whose normalized system matrix respects
// the filter preconditions: eps_kr <= |lambda| <= 1 with some margin.
struct RandomInstance {
  FHat fhat;
  Eigen::VectorXd y;
};

RandomInstance random_well_conditioned(std::mt19937_64& rng, double eps_kr) {
  std::uniform_real_distribution<double> gamma_dist(0.5, 5.0);
  std::uniform_int_distribution<int> m_dist(2, 4);
  for (;;) {
    const int m = m_dist(rng);
    const Eigen::MatrixXd k = testsupport::random_psd(m, rng);
    const FHat fhat = build_fhat(GramMatrix{k}, gamma_dist(rng));
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(fhat.matrix, Eigen::EigenvaluesOnly);
    const double min_abs = es.eigenvalues().cwiseAbs().minCoeff();
    const double max_abs = es.eigenvalues().cwiseAbs().maxCoeff();
    if (min_abs < 1.15 * eps_kr || max_abs > 1.0) continue;
    Eigen::VectorXd y(m);
    for (int i = 0; i < m; ++i) y[i] = i % 2 == 0 ? 1.0 : -1.0;
    return RandomInstance{fhat, y};
  }
}

Eigen::VectorXcd classical_direction(const FHat& fhat, const Eigen::VectorXd& y, Eigen::Index dim) {
  const Eigen::Index m = y.size();
  const Eigen::MatrixXd f = fhat.matrix * fhat.trace_f;
  Eigen::VectorXd rhs(m + 1);
  rhs[0] = 0.0;
  rhs.tail(m) = y;
  const Eigen::VectorXd sol = testsupport::gauss_solve(f, rhs);
  Eigen::VectorXcd padded = Eigen::VectorXcd::Zero(dim);
  for (Eigen::Index i = 0; i <= m; ++i) padded[i] = sol[i];
  return padded / padded.norm();
}

}  // namespace

TEST_CASE("build_fhat assembles the normalized system matrix") {
  GramMatrix k{Eigen::MatrixXd::Identity(2, 2)};
  const FHat f = build_fhat(k, 1.0);

  Eigen::MatrixXd expected(3, 3);
  expected << 0, 1, 1, 1, 2, 0, 1, 0, 2;
  CHECK(f.trace_f == doctest::Approx(4.0));
  CHECK((f.matrix - expected / 4.0).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(f.matrix.trace() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK((f.matrix - f.matrix.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  // tr F = tr K + M / gamma
  CHECK(f.trace_f == doctest::Approx(k.entries.trace() + 2.0 / 1.0));
}

TEST_CASE("build_fhat with infinite gamma drops the identity term") {
  Eigen::MatrixXd km(2, 2);
  km << 2.0, 0.5, 0.5, 1.0;
  const FHat f = build_fhat(GramMatrix{km}, std::numeric_limits<double>::infinity());
  CHECK(f.trace_f == doctest::Approx(km.trace()));
  CHECK(f.i_term.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("pad_and_embed preserves the support spectrum and adds zeros") {
  GramMatrix k{Eigen::MatrixXd::Identity(2, 2)};
  const FHat f = build_fhat(k, 1.0);
  const HermitianOp embedded = pad_and_embed(f);
  REQUIRE(embedded.matrix().rows() == 4);

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(f.matrix, Eigen::EigenvaluesOnly);
  const Eigen::SelfAdjointEigenSolver<CMatrix> big(embedded.matrix(), Eigen::EigenvaluesOnly);
  // padded spectrum = support spectrum plus one zero
  std::vector<double> eb(big.eigenvalues().data(), big.eigenvalues().data() + 4);
  std::vector<double> es(small.eigenvalues().data(), small.eigenvalues().data() + 3);
  es.push_back(0.0);
  std::sort(eb.begin(), eb.end());
  std::sort(es.begin(), es.end());
  for (int i = 0; i < 4; ++i) CHECK(eb[static_cast<std::size_t>(i)] == doctest::Approx(es[static_cast<std::size_t>(i)]).epsilon(1e-12));
}

TEST_CASE("eigenvalue_filter") {
  CHECK(eigenvalue_filter(0.25, 0.25) == doctest::Approx(1.0));
  CHECK(eigenvalue_filter(1.0, 0.25) == doctest::Approx(0.25));
  CHECK(eigenvalue_filter(0.2, 0.25) == 0.0);
  CHECK(eigenvalue_filter(-0.5, 0.25) == doctest::Approx(0.5));
  CHECK_THROWS(eigenvalue_filter(0.5, 0.0));
}

TEST_CASE("decode_reading uses the two's-complement convention") {
  const double t0 = std::numbers::pi;
  CHECK(decode_reading(0, 3, t0) == doctest::Approx(0.0));
  CHECK(decode_reading(2, 3, t0) == doctest::Approx(0.5));   // phase 1/4 -> lambda 1/2
  CHECK(decode_reading(4, 3, t0) == doctest::Approx(1.0));   // phase 1/2 -> lambda 1
  CHECK(decode_reading(7, 3, t0) == doctest::Approx(-0.25)); // phase 7/8 -> lambda -1/4
}

TEST_CASE("quantum_solve: exact-eigenvector toy instance") {
  GramMatrix k{Eigen::MatrixXd::Identity(2, 2)};
  const FHat fhat = build_fhat(k, 1.0);
  Eigen::VectorXd y(2);
  y << 1, -1;

  // (0, 1, -1) is an eigenvector of F with eigenvalue 2 (so 1/2 after normalization)
  Eigen::VectorXd v(3);
  v << 0, 1, -1;
  const Eigen::VectorXd fv = fhat.matrix * fhat.trace_f * v;
  CHECK((fv - 2.0 * v).cwiseAbs().maxCoeff() < 1e-12);

  InversionConfig cfg;
  ResourceLedger ledger;
  const QuantumSolveResult res = quantum_solve(fhat, y, cfg, &ledger);

  Eigen::VectorXcd expected = Eigen::VectorXcd::Zero(4);
  expected[1] = 1.0 / std::numbers::sqrt2;
  expected[2] = -1.0 / std::numbers::sqrt2;
  CHECK(state_fidelity(res.solution.amplitudes(), expected) >= 0.9999);

  // classical solve oracle gives the same direction
  CHECK(state_fidelity(res.solution.amplitudes(), classical_direction(fhat, y, 4)) >= 0.9999);

  // lambda = 1/2 reads exactly; the ancilla amplitude is eps_kr / lambda = 1/8
  CHECK(res.success_probability == doctest::Approx(1.0 / 64.0).epsilon(1e-10));
  CHECK(res.postselect_attempts == 64);
  CHECK(ledger.measurement_shots == 64);
  CHECK(ledger.qpe_qubits_used == static_cast<std::uint64_t>(cfg.precision_qubits));
  CHECK_FALSE(res.coarse_resolution_warning);
  CHECK_FALSE(res.wraparound_warning);
}

TEST_CASE("quantum_solve: scaled identity returns the input direction") {
  FHat fhat;
  fhat.matrix = Eigen::MatrixXd::Identity(3, 3) / 3.0;
  fhat.trace_f = 3.0;
  fhat.gamma = 1.0;
  fhat.j_term = Eigen::MatrixXd::Zero(3, 3);
  fhat.k_term = Eigen::MatrixXd::Identity(3, 3);
  fhat.i_term = Eigen::MatrixXd::Zero(3, 3);

  Eigen::VectorXd y(2);
  y << 1, -1;
  const QuantumSolveResult res = quantum_solve(fhat, y, InversionConfig{});
  Eigen::VectorXcd expected = Eigen::VectorXcd::Zero(4);
  expected[1] = 1.0 / std::numbers::sqrt2;
  expected[2] = -1.0 / std::numbers::sqrt2;
  CHECK(state_fidelity(res.solution.amplitudes(), expected) >= 1.0 - 1e-9);
}

TEST_CASE("quantum_solve: random well-conditioned instances track the classical solve") {
  std::mt19937_64 rng(1234);
  InversionConfig cfg;
  for (int trial = 0; trial < 10; ++trial) {
    const RandomInstance inst = random_well_conditioned(rng, cfg.eps_kr);
    const QuantumSolveResult res = quantum_solve(inst.fhat, inst.y, cfg);
    const double fid = state_fidelity(res.solution.amplitudes(),
                                      classical_direction(inst.fhat, inst.y, res.solution.dim()));
    CHECK(fid >= 0.99);
    CHECK_FALSE(res.wraparound_warning);

    // success probability equals the post-selected mass of the full final state
    double mass = 0.0;
    for (Eigen::Index i = 1; i < res.final_state.size(); i += 2) mass += std::norm(res.final_state[i]);
    CHECK(res.success_probability == doctest::Approx(mass).epsilon(1e-10));
  }
}

TEST_CASE("quantum_solve: filtered-out spectrum reports a post-selection failure") {
  // all eigenvalues of F_hat sit below the floor when eps_kr is close to 1
  GramMatrix k{Eigen::MatrixXd::Identity(4, 4)};
  const FHat fhat = build_fhat(k, 1.0);
  Eigen::VectorXd y(4);
  y << 1, -1, 1, -1;
  InversionConfig cfg;
  cfg.eps_kr = 0.999;
  CHECK_THROWS_WITH(quantum_solve(fhat, y, cfg), doctest::Contains("post-selection"));
}

TEST_CASE("quantum_solve: coarse reading grids are flagged") {
  GramMatrix k{Eigen::MatrixXd::Identity(2, 2)};
  const FHat fhat = build_fhat(k, 1.0);
  Eigen::VectorXd y(2);
  y << 1, -1;
  InversionConfig cfg;
  cfg.precision_qubits = 2;  // grid {0, 1/2, 1}; eps_kr floor is representable
  cfg.eps_kr = 0.6;          // now only |lambda| = 1 would pass, spectrum peaks at 0.6
  CHECK_THROWS(quantum_solve(fhat, y, cfg));
}

TEST_CASE("quantum_solve: trotterized evolution converges quadratically to the exact path") {
  Eigen::MatrixXd km(2, 2);
  km << 1.0, 0.4, 0.4, 0.8;
  const FHat fhat = build_fhat(GramMatrix{km}, 2.0);
  Eigen::VectorXd y(2);
  y << 1, -1;

  InversionConfig exact_cfg;
  const QuantumSolveResult exact = quantum_solve(fhat, y, exact_cfg);

  std::vector<double> dts;
  std::vector<double> errs;
  for (int steps : {16, 32, 64}) {
    InversionConfig cfg;
    cfg.evolution = EvolutionKind::trotter;
    cfg.trotter_steps = steps;
    const QuantumSolveResult res = quantum_solve(fhat, y, cfg);
    dts.push_back(cfg.t0 / steps);
    errs.push_back(1.0 - state_fidelity(res.solution.amplitudes(), exact.solution.amplitudes()));
  }
  CHECK(testsupport::fitted_slope(dts, errs) >= 1.9);
}

TEST_CASE("quantum_solve validates its configuration") {
  GramMatrix k{Eigen::MatrixXd::Identity(2, 2)};
  const FHat fhat = build_fhat(k, 1.0);
  Eigen::VectorXd y(2);
  y << 1, -1;
  InversionConfig cfg;
  cfg.precision_qubits = 0;
  CHECK_THROWS(quantum_solve(fhat, y, cfg));
  cfg.precision_qubits = 13;
  CHECK_THROWS(quantum_solve(fhat, y, cfg));
  cfg = InversionConfig{};
  cfg.eps_kr = 0.0;
  CHECK_THROWS(quantum_solve(fhat, y, cfg));
  Eigen::VectorXd wrong(3);
  wrong << 1, -1, 1;
  CHECK_THROWS(quantum_solve(fhat, wrong, InversionConfig{}));
}
