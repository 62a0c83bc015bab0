#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qallpair/rng.hpp"
#include "qallpair/statevector.hpp"
#include "support.hpp"

using namespace qap;

namespace {

CMatrix random_unitary(Eigen::Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix g(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) g(i, j) = Complex(normal(rng), normal(rng));
  }
  const Eigen::HouseholderQR<CMatrix> qr(g);
  return qr.householderQ();
}

QState random_state(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CVector v(Eigen::Index{1} << n);
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = Complex(normal(rng), normal(rng));
  v /= v.norm();
  return QState(n, std::move(v));
}

}  // namespace

TEST_CASE("amplitude_encode") {
  SUBCASE("basis vector gives |00>") {
    Eigen::VectorXd v(4);
    v << 1, 0, 0, 0;
    const QState q = amplitude_encode(v);
    CHECK(q.n_qubits() == 2);
    CHECK(q.amp(0) == Complex(1.0));
  }
  SUBCASE("(1,1) gives the uniform one-qubit superposition") {
    Eigen::VectorXd v(2);
    v << 1, 1;
    const QState q = amplitude_encode(v);
    CHECK(q.n_qubits() == 1);
    CHECK(std::abs(q.amp(0) - Complex(1.0 / std::numbers::sqrt2)) < 1e-12);
    CHECK(std::abs(q.amp(1) - Complex(1.0 / std::numbers::sqrt2)) < 1e-12);
  }
  SUBCASE("(3,4) normalizes to (0.6, 0.8)") {
    Eigen::VectorXd v(2);
    v << 3, 4;
    const QState q = amplitude_encode(v);
    CHECK(q.amp(0).real() == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(q.amp(1).real() == doctest::Approx(0.8).epsilon(1e-12));
  }
  SUBCASE("non-power-of-two pads high indices with zeros") {
    Eigen::VectorXd v(3);
    v << 1, 1, 1;
    const QState q = amplitude_encode(v);
    CHECK(q.n_qubits() == 2);
    CHECK(q.amp(3) == Complex(0.0));
  }
  SUBCASE("zero vector is rejected") {
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(4);
    CHECK_THROWS(amplitude_encode(zero));
  }
}

TEST_CASE("apply_gate basics") {
  SUBCASE("H on |0>") {
    const QState q = apply_gate(QState::zero(1), gates::hadamard(), {0});
    CHECK(std::abs(q.amp(0) - Complex(1.0 / std::numbers::sqrt2)) < 1e-12);
    CHECK(std::abs(q.amp(1) - Complex(1.0 / std::numbers::sqrt2)) < 1e-12);
  }
  SUBCASE("controlled X with the control at |0> does nothing") {
    const QState q = QState::zero(2);
    const QState out = apply_gate(q, gates::pauli_x(), {1}, {0});
    CHECK((out.amplitudes() - q.amplitudes()).norm() < 1e-14);
  }
  SUBCASE("controlled X with the control at |1> flips the target") {
    CVector v = CVector::Zero(4);
    v[2] = 1.0;  // |10>
    const QState out = apply_gate(QState(2, std::move(v)), gates::pauli_x(), {1}, {0});
    CHECK(std::abs(out.amp(3) - Complex(1.0)) < 1e-14);  // |11>
  }
  SUBCASE("two Hadamards cancel") {
    std::mt19937_64 rng(3);
    const QState q = random_state(3, rng);
    const QState out = apply_gate(apply_gate(q, gates::hadamard(), {1}), gates::hadamard(), {1});
    CHECK((out.amplitudes() - q.amplitudes()).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("non-unitary matrix is rejected") {
    CMatrix bad = CMatrix::Identity(2, 2) * 2.0;
    CHECK_THROWS(apply_gate(QState::zero(1), bad, {0}));
  }
  SUBCASE("target/control collision is rejected") {
    CHECK_THROWS(apply_gate(QState::zero(2), gates::pauli_x(), {0}, {0}));
  }
}

TEST_CASE("measurement") {
  SUBCASE("|1> always reads 1") {
    CVector v = CVector::Zero(2);
    v[1] = 1.0;
    auto rng = make_rng(1);
    const MeasurementRecord rec = measure(QState(1, std::move(v)), 0, rng);
    CHECK(rec.outcome == 1);
    CHECK(rec.probability == doctest::Approx(1.0));
  }
  SUBCASE("uniform superposition has probability exactly 1/2") {
    const QState q = apply_gate(QState::zero(1), gates::hadamard(), {0});
    CHECK(probability_of(q, 0, 0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(probability_of(q, 0, 1) == doctest::Approx(0.5).epsilon(1e-14));
  }
  SUBCASE("10^4 seeded samples land in the binomial 3-sigma band") {
    const QState q = apply_gate(QState::zero(1), gates::hadamard(), {0});
    auto rng = make_rng(99);
    int ones = 0;
    for (int i = 0; i < 10000; ++i) {
      if (measure(q, 0, rng).outcome == 1) ++ones;
    }
    CHECK(std::abs(ones / 10000.0 - 0.5) <= 0.02);
  }
  SUBCASE("post state is renormalized and consistent") {
    std::mt19937_64 rng(17);
    const QState q = random_state(3, rng);
    const MeasurementRecord rec = measure(q, 1, rng);
    CHECK(rec.post_state.amplitudes().norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(probability_of(rec.post_state, 1, rec.outcome) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("evolve") {
  SUBCASE("t = 0 is the identity") {
    std::mt19937_64 rng(23);
    const QState q = random_state(2, rng);
    const HermitianOp h(testsupport::random_psd(4, rng));
    const QState out = evolve(q, h, 0.0);
    CHECK((out.amplitudes() - q.amplitudes()).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("sigma_x for t = pi/2 sends |0> to -i|1>") {
    const HermitianOp h{CMatrix(gates::pauli_x())};
    const QState out = evolve(QState::zero(1), h, std::numbers::pi / 2);
    CHECK(std::abs(out.amp(0)) < 1e-12);
    CHECK(std::abs(out.amp(1) - Complex(0.0, -1.0)) < 1e-12);
  }
  SUBCASE("norm-estimation Hamiltonian reproduces the closed-form ancilla probability") {
    // H = |x_i| |0><0| (x) sx + |x_j| |1><1| (x) sx with |x_i| = 1, |x_j| = 2
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(4, 4);
    h(0, 1) = h(1, 0) = 1.0;
    h(2, 3) = h(3, 2) = 2.0;
    CVector init = CVector::Zero(4);
    init[0] = 1.0 / std::numbers::sqrt2;
    init[2] = -1.0 / std::numbers::sqrt2;
    const QState out = evolve(QState(2, std::move(init)), HermitianOp(h), 0.1);
    const double expected = 0.5 * (std::pow(std::sin(0.1), 2) + std::pow(std::sin(0.2), 2));
    CHECK(probability_of(out, 1, 1) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(expected == doctest::Approx(0.024718).epsilon(1e-4));
  }
  SUBCASE("semigroup property") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 5; ++trial) {
      const QState q = random_state(2, rng);
      const HermitianOp h(testsupport::random_psd(4, rng));
      const QState a = evolve(q, h, 0.7 + 0.4);
      const QState b = evolve(evolve(q, h, 0.7), h, 0.4);
      CHECK((a.amplitudes() - b.amplitudes()).norm() < 1e-9);
    }
  }
  SUBCASE("non-Hermitian input is rejected") {
    CMatrix bad(2, 2);
    bad << 0, 1, 2, 0;
    CHECK_THROWS(HermitianOp(bad));
  }
}

TEST_CASE("trotter_exp") {
  SUBCASE("commuting diagonal terms are exact") {
    Eigen::MatrixXd a = Eigen::Vector4d(0.3, -0.2, 0.9, 0.1).asDiagonal();
    Eigen::MatrixXd b = Eigen::Vector4d(-0.5, 0.8, 0.2, 0.6).asDiagonal();
    const CMatrix approx = trotter_exp({HermitianOp(a), HermitianOp(b)}, 0.3, 4);
    const CMatrix exact = evolution_unitary(HermitianOp(Eigen::MatrixXd(a + b)), 0.3 * 4);
    CHECK((approx - exact).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("a single term is exact for any dt") {
    std::mt19937_64 rng(41);
    const Eigen::MatrixXd a = testsupport::random_psd(4, rng);
    const CMatrix approx = trotter_exp({HermitianOp(a)}, 0.7, 3);
    const CMatrix exact = evolution_unitary(HermitianOp(a), 0.7 * 3);
    CHECK((approx - exact).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("toy star-graph/kernel split: halving dt at fixed steps cuts the error 3x-5x") {
    // J and K blocks of the K=I2, gamma=1 system, trace-normalized
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(4, 4);
    j(0, 1) = j(1, 0) = j(0, 2) = j(2, 0) = 1.0;
    Eigen::MatrixXd kb = Eigen::MatrixXd::Zero(4, 4);
    kb(1, 1) = kb(2, 2) = 2.0;
    j /= 4.0;
    kb /= 4.0;
    const std::vector<HermitianOp> terms = {HermitianOp(j), HermitianOp(kb)};
    const int steps = 8;
    auto err = [&](double dt) {
      const CMatrix approx = trotter_exp(terms, dt, steps);
      const CMatrix exact = evolution_unitary(HermitianOp(Eigen::MatrixXd(j + kb)), dt * steps);
      return (approx - exact).cwiseAbs().maxCoeff();
    };
    const double ratio = err(0.1) / err(0.05);
    CHECK(ratio >= 3.0);
    CHECK(ratio <= 5.0);
  }
}

TEST_CASE("commutator expansion error is second order in dt") {
  std::mt19937_64 rng(53);
  Eigen::MatrixXd k = testsupport::random_psd(4, rng);
  k /= k.trace();
  Eigen::MatrixXd rho_r = testsupport::random_psd(4, rng);
  rho_r /= rho_r.trace();
  const CMatrix khat = k.cast<Complex>();
  const CMatrix rho = rho_r.cast<Complex>();

  std::vector<double> dts = {0.1, 0.05, 0.025};
  std::vector<double> errs;
  for (double dt : dts) {
    const CMatrix u = evolution_unitary(HermitianOp(k), dt);
    const CMatrix conjugated = u * rho * u.adjoint();
    const CMatrix first_order = rho - Complex(0, dt) * (khat * rho - rho * khat);
    errs.push_back((conjugated - first_order).norm());
  }
  CHECK(testsupport::fitted_slope(dts, errs) >= 1.9);
}

TEST_CASE("grover_iterate") {
  SUBCASE("N=4, m=1, one iteration reaches probability 1") {
    const QState q = uniform_superposition(4);
    const QState out = grover_iterate(q, [](Eigen::Index i) { return i == 2; }, 1, 4);
    CHECK(std::norm(out.amp(2)) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("zero iterations keep the uniform marked mass m/N") {
    const QState q = uniform_superposition(8);
    const QState out = grover_iterate(q, [](Eigen::Index i) { return i < 3; }, 0, 8);
    double mass = 0;
    for (Eigen::Index i = 0; i < 3; ++i) mass += std::norm(out.amp(i));
    CHECK(mass == doctest::Approx(3.0 / 8.0).epsilon(1e-12));
  }
  SUBCASE("all marked stays at probability 1") {
    const QState q = uniform_superposition(4);
    for (int j : {0, 1, 2, 5}) {
      const QState out = grover_iterate(q, [](Eigen::Index) { return true; }, j, 4);
      double mass = 0;
      for (Eigen::Index i = 0; i < 4; ++i) mass += std::norm(out.amp(i));
      CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  SUBCASE("closed form sin^2((2j+1) theta) for N <= 16") {
    ResourceLedger ledger;
    for (Eigen::Index n = 1; n <= 16; ++n) {
      const QState q = uniform_superposition(n);
      for (Eigen::Index m = 0; m <= n; ++m) {
        for (int j = 0; j <= 4; ++j) {
          const QState out = grover_iterate(q, [m](Eigen::Index i) { return i < m; }, j, n, &ledger);
          double mass = 0;
          for (Eigen::Index i = 0; i < m; ++i) mass += std::norm(out.amp(i));
          const double theta = std::asin(std::sqrt(static_cast<double>(m) / n));
          const double expected = std::pow(std::sin((2.0 * j + 1.0) * theta), 2);
          CHECK(mass == doctest::Approx(expected).epsilon(1e-9));
        }
      }
    }
    CHECK(ledger.oracle_queries == ledger.grover_iterations);
    CHECK(ledger.oracle_queries > 0);
  }
}

TEST_CASE("phase_estimate") {
  SUBCASE("Z on |1> with 3 reading qubits is a point mass at 0.100b") {
    CVector v = CVector::Zero(2);
    v[1] = 1.0;
    const Eigen::VectorXd dist = phase_estimate(gates::pauli_z(), QState(1, std::move(v)), 3);
    REQUIRE(dist.size() == 8);
    CHECK(dist[4] == doctest::Approx(1.0).epsilon(1e-10));  // reading 100b = 4, phase 1/2
  }
  SUBCASE("eigenphase 0 input is a point mass at reading 0") {
    const Eigen::VectorXd dist = phase_estimate(gates::pauli_z(), QState::zero(1), 3);
    CHECK(dist[0] == doctest::Approx(1.0).epsilon(1e-10));
  }
  SUBCASE("eigenphase 1/3 with 4 qubits peaks at the nearest 4-bit fraction 0.0101b") {
    CMatrix u = CMatrix::Identity(2, 2);
    u(1, 1) = std::exp(Complex(0.0, 2.0 * std::numbers::pi / 3.0));
    CVector v = CVector::Zero(2);
    v[1] = 1.0;
    const Eigen::VectorXd dist = phase_estimate(u, QState(1, std::move(v)), 4);
    Eigen::Index mode = 0;
    dist.maxCoeff(&mode);
    CHECK(mode == 5);  // 0.0101b = 5/16, nearest to 1/3
  }
  SUBCASE("ledger counts the reading qubits") {
    ResourceLedger ledger;
    phase_estimate(gates::pauli_z(), QState::zero(1), 5, &ledger);
    CHECK(ledger.qpe_qubits_used == 5);
  }
}

TEST_CASE("norm preservation across the operation set") {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 10; ++trial) {
    QState q = random_state(3, rng);
    q = apply_gate(q, random_unitary(2, rng), {1});
    q = apply_gate(q, random_unitary(4, rng), {0, 2});
    q = evolve(q, HermitianOp(testsupport::random_psd(8, rng)), 0.37);
    q = grover_iterate(q, [](Eigen::Index i) { return i % 3 == 0; }, 2, q.dim());
    CHECK(std::abs(q.amplitudes().norm() - 1.0) < 1e-9);
  }
}

TEST_CASE("fourier helper matches the direct DFT") {
  std::mt19937_64 rng(71);
  const int t = 4;
  const Eigen::Index T = 1 << t;
  CVector a(T);
  for (Eigen::Index i = 0; i < T; ++i) {
    std::normal_distribution<double> normal;
    a[i] = Complex(normal(rng), normal(rng));
  }
  CVector direct = CVector::Zero(T);
  for (Eigen::Index y = 0; y < T; ++y) {
    for (Eigen::Index x = 0; x < T; ++x) {
      direct[y] += a[x] * std::exp(Complex(0.0, 2.0 * std::numbers::pi * x * y / T));
    }
  }
  direct /= std::sqrt(static_cast<double>(T));
  CVector fft = a;
  detail::fourier_high_register(fft, t, +1);
  CHECK((fft - direct).cwiseAbs().maxCoeff() < 1e-10);

  // inverse undoes forward
  detail::fourier_high_register(fft, t, -1);
  CHECK((fft - a).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("hadamard helper matches gate application") {
  std::mt19937_64 rng(73);
  const QState q = random_state(3, rng);
  CVector amps = q.amplitudes();
  detail::hadamard_high_register(amps, 2);  // top two qubits
  QState gated = apply_gate(q, gates::hadamard(), {0});
  gated = apply_gate(gated, gates::hadamard(), {1});
  CHECK((amps - gated.amplitudes()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("qubit cap is enforced") {
  CHECK_THROWS(QState::zero(25));
}
