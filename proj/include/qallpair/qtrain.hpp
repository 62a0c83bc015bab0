#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "qallpair/ledger.hpp"
#include "qallpair/lssvm.hpp"
#include "qallpair/statevector.hpp"

namespace qap {

/// Trace-normalized system matrix F / tr(F) with F = [[0, 1^T], [1, K + gamma^-1 I]],
/// kept together with its star-graph / kernel / identity building blocks.
struct FHat {
  Eigen::MatrixXd matrix;   ///< F / tr(F), trace 1
  double trace_f = 0.0;     ///< tr(F) = tr(K) + M / gamma
  double gamma = 0.0;
  Eigen::MatrixXd j_term;   ///< [[0, 1^T], [1, 0]]
  Eigen::MatrixXd k_term;   ///< kernel block, zero border row/column
  Eigen::MatrixXd i_term;   ///< gamma^-1 on the lower diagonal block

  Eigen::Index dim() const { return matrix.rows(); }
};

FHat build_fhat(const GramMatrix& K, double gamma);

/// Direct-sum embedding into the next power-of-two dimension; the added
/// block is zero, so the support spectrum is preserved and padded slots of an
/// encoded vector are never mixed in.
HermitianOp pad_and_embed(const FHat& fhat);

enum class EvolutionKind { exact, trotter };

struct InversionConfig {
  int precision_qubits = 9;            ///< QPE register width, 1..12
  double eps_kr = 1.0 / 16.0;          ///< eigenvalue floor; weights are eps_kr / lambda
  double t0 = std::numbers::pi;        ///< evolution-time scale (phase = lambda * t0 / 2pi)
  std::uint64_t max_postselect_attempts = 1000000;
  EvolutionKind evolution = EvolutionKind::exact;
  int trotter_steps = 64;              ///< per t0, when evolution == trotter
};

/// eps_kr / |lambda_hat| for readings at or above the floor, 0 below it.
double eigenvalue_filter(double lambda_hat, double eps_kr);

struct QuantumSolveResult {
  QState solution;                 ///< post-selected solution register state
  double success_probability = 0;  ///< exact ancilla-1 mass
  CVector final_state;             ///< full pre-selection register [reading x solution x ancilla]
  std::uint64_t postselect_attempts = 0;  ///< expected repetitions ~ 1/p, charged to the ledger
  bool coarse_resolution_warning = false; ///< reading grid cannot represent any |lambda| >= eps_kr
  bool wraparound_warning = false;        ///< some |eigenvalue| maps past phase 1/2 and aliases
  int solution_qubits = 0;
};

/// Matrix-inversion training pipeline: encode (0, y), phase-estimate
/// e^{+i F_hat t0}, rotate an ancilla by the filtered inverse eigenvalue,
/// uncompute, and post-select the ancilla. The returned state approximates
/// the normalized classical solution of F (b, alpha) = (0, y).
QuantumSolveResult quantum_solve(const FHat& fhat, const Eigen::VectorXd& y,
                                 const InversionConfig& cfg, ResourceLedger* ledger = nullptr);

/// Signed eigenvalue encoded by reading x of a t-bit register: phases in
/// (1/2, 1) count as negative (two's complement).
double decode_reading(Eigen::Index reading, int precision_qubits, double t0);

}  // namespace qap
