#pragma once

#include <complex>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "qallpair/ledger.hpp"

namespace qap {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr int kMaxQubits = 24;

/// Normalized amplitude vector over n qubits.
///
/// Qubit 0 is the most significant bit of the basis index, so a composite
/// register written A (x) B stores A's qubits before B's and the basis index
/// is idx_A * dim_B + idx_B. States are immutable; operations return copies.
class QState {
 public:
  QState() : QState(zero(1)) {}
  QState(int n_qubits, CVector amplitudes);

  /// |0...0> on n qubits.
  static QState zero(int n_qubits);

  int n_qubits() const { return n_qubits_; }
  Eigen::Index dim() const { return amps_.size(); }
  const CVector& amplitudes() const { return amps_; }
  Complex amp(Eigen::Index basis_index) const { return amps_[basis_index]; }

 private:
  int n_qubits_;
  CVector amps_;
};

/// Hermitian matrix acting on a power-of-two dimensional register slice.
class HermitianOp {
 public:
  explicit HermitianOp(CMatrix matrix);
  explicit HermitianOp(const Eigen::MatrixXd& matrix);

  const CMatrix& matrix() const { return matrix_; }
  int qubits() const { return qubits_; }

 private:
  CMatrix matrix_;
  int qubits_;
};

struct MeasurementRecord {
  int outcome = 0;
  double probability = 0.0;
  QState post_state;
};

/// Pads to the next power of two, normalizes, and stores v as amplitudes
/// (one qubit minimum). The zero vector is rejected.
QState amplitude_encode(const CVector& v);
QState amplitude_encode(const Eigen::VectorXd& v);

namespace gates {
CMatrix hadamard();
CMatrix pauli_x();
CMatrix pauli_y();
CMatrix pauli_z();
CMatrix rotation_y(double theta);
CMatrix swap();
}  // namespace gates

/// Applies `unitary` to the listed target qubits, conditioned on every
/// control qubit being |1>. Targets and controls must be disjoint and in
/// range; the matrix must be unitary.
QState apply_gate(const QState& q, const CMatrix& unitary, const std::vector<int>& targets,
                  const std::vector<int>& controls = {});

/// Projective measurement of one qubit with Born probabilities.
MeasurementRecord measure(const QState& q, int qubit, std::mt19937_64& rng);

/// Exact outcome probability without collapse.
double probability_of(const QState& q, int qubit, int outcome);

/// Samples a full-register basis index from |amplitude|^2.
Eigen::Index sample_index(const QState& q, std::mt19937_64& rng);

/// Exact e^{-iHt} built from the eigendecomposition of H.
CMatrix evolution_unitary(const HermitianOp& h, double t);

/// e^{-iHt}|q> on the listed target qubits (or the full register).
QState evolve(const QState& q, const HermitianOp& h, double t, const std::vector<int>& targets);
QState evolve(const QState& q, const HermitianOp& h, double t);

/// First-order product formula: (prod_j e^{-i terms[j] dt})^steps, factors in
/// the listed order. Exact for mutually commuting terms; otherwise the
/// distance from e^{-i (sum terms) dt steps} is O(dt^2 steps).
CMatrix trotter_exp(const std::vector<HermitianOp>& terms, double dt, int steps);

/// Uniform superposition over the first n_states basis indices.
QState uniform_superposition(Eigen::Index n_states);

/// (diffusion o phase-oracle)^iterations. The oracle flips the sign of basis
/// states where `marked` holds; the diffusion reflects about the uniform
/// superposition over the first search_size indices. Each oracle application
/// is counted in the ledger.
QState grover_iterate(const QState& q, const std::function<bool(Eigen::Index)>& marked,
                      int iterations, Eigen::Index search_size,
                      ResourceLedger* ledger = nullptr);

/// Textbook phase estimation (controlled-U^{2^j} ladder + inverse QFT) with
/// `precision_qubits` reading bits. Returns the exact distribution over the
/// 2^t readings; reading r estimates phase r / 2^t of U's eigenvalue
/// e^{2 pi i phi}.
Eigen::VectorXd phase_estimate(const CMatrix& unitary, const QState& input, int precision_qubits,
                               ResourceLedger* ledger = nullptr);

/// Squared overlap |<a|b>|^2 of two normalized amplitude vectors.
double state_fidelity(const CVector& a, const CVector& b);

namespace detail {

/// In-place DFT over the top register of width 2^t; the low `block` indices
/// ride along. sign=+1 applies the QFT |x> -> sum_y e^{+2 pi i x y / T}|y>/sqrt(T),
/// sign=-1 its inverse.
void fourier_high_register(CVector& amps, int t, int sign);

/// In-place H^{(x) t} over the top register.
void hadamard_high_register(CVector& amps, int t);

/// Distribution over 2^t QPE readings for a unitary given as an "advance one
/// power" callback: apply_u must map v to U v in place.
Eigen::VectorXd qpe_distribution(const std::function<void(CVector&)>& apply_u,
                                 const CVector& input, int t);

/// Smallest qubit count whose register holds `size` amplitudes (min 1).
int qubits_for(Eigen::Index size);

bool is_unitary(const CMatrix& m, double tol);

}  // namespace detail

}  // namespace qap
