#include "qallpair/qtrain.hpp"

#include <cmath>
#include <stdexcept>

namespace qap {

FHat build_fhat(const GramMatrix& K, double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("build_fhat: gamma must be positive");
  const Eigen::Index m = K.size();
  const double inv_gamma = std::isinf(gamma) ? 0.0 : 1.0 / gamma;

  FHat f;
  f.gamma = gamma;
  f.j_term = Eigen::MatrixXd::Zero(m + 1, m + 1);
  f.j_term.block(0, 1, 1, m).setOnes();
  f.j_term.block(1, 0, m, 1).setOnes();
  f.k_term = Eigen::MatrixXd::Zero(m + 1, m + 1);
  f.k_term.block(1, 1, m, m) = K.entries;
  f.i_term = Eigen::MatrixXd::Zero(m + 1, m + 1);
  f.i_term.block(1, 1, m, m) = inv_gamma * Eigen::MatrixXd::Identity(m, m);

  const Eigen::MatrixXd full = f.j_term + f.k_term + f.i_term;
  f.trace_f = full.trace();
  if (!(f.trace_f > 0.0)) throw std::invalid_argument("build_fhat: non-positive trace");
  f.matrix = full / f.trace_f;
  return f;
}

HermitianOp pad_and_embed(const FHat& fhat) {
  const Eigen::Index d = fhat.dim();
  const int q = detail::qubits_for(d);
  if (q > kMaxQubits) throw std::invalid_argument("pad_and_embed: dimension exceeds qubit cap");
  const Eigen::Index padded = Eigen::Index{1} << q;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(padded, padded);
  m.topLeftCorner(d, d) = fhat.matrix;
  return HermitianOp(m);
}

double eigenvalue_filter(double lambda_hat, double eps_kr) {
  if (!(eps_kr > 0.0) || eps_kr > 1.0) throw std::invalid_argument("eps_kr must be in (0, 1]");
  const double mag = std::abs(lambda_hat);
  return mag >= eps_kr ? eps_kr / mag : 0.0;
}

double decode_reading(Eigen::Index reading, int precision_qubits, double t0) {
  const Eigen::Index T = Eigen::Index{1} << precision_qubits;
  const double signed_x =
      reading <= T / 2 ? static_cast<double>(reading) : static_cast<double>(reading - T);
  const double phase = signed_x / static_cast<double>(T);
  return 2.0 * std::numbers::pi * phase / t0;
}

QuantumSolveResult quantum_solve(const FHat& fhat, const Eigen::VectorXd& y,
                                 const InversionConfig& cfg, ResourceLedger* ledger) {
  const Eigen::Index m = fhat.dim() - 1;
  if (y.size() != m) throw std::invalid_argument("quantum_solve: label length mismatch");
  if (cfg.precision_qubits < 1 || cfg.precision_qubits > 12) {
    throw std::invalid_argument("quantum_solve: precision_qubits must be in 1..12");
  }
  if (!(cfg.eps_kr > 0.0) || cfg.eps_kr > 1.0) {
    throw std::invalid_argument("quantum_solve: eps_kr must be in (0, 1]");
  }

  const int t = cfg.precision_qubits;
  const Eigen::Index T = Eigen::Index{1} << t;
  const HermitianOp embedded = pad_and_embed(fhat);
  const Eigen::Index d = embedded.matrix().rows();
  const int sol_qubits = detail::qubits_for(d);
  if (t + sol_qubits + 1 > kMaxQubits) {
    throw std::invalid_argument("quantum_solve: register (reading + solution + ancilla) exceeds qubit cap");
  }

  // |y_bar> = encode (0, y), padded into the solution register
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(d);
  rhs.segment(1, m) = y;
  const QState ybar = amplitude_encode(rhs);

  CMatrix u;                       // e^{+i F_hat t0}
  if (cfg.evolution == EvolutionKind::exact) {
    u = evolution_unitary(embedded, -cfg.t0);
  } else {
    if (cfg.trotter_steps < 1) throw std::invalid_argument("quantum_solve: trotter_steps must be >= 1");
    const Eigen::Index full = d;
    auto embed = [&](const Eigen::MatrixXd& term) {
      Eigen::MatrixXd p = Eigen::MatrixXd::Zero(full, full);
      p.topLeftCorner(fhat.dim(), fhat.dim()) = term / fhat.trace_f;
      return HermitianOp(p);
    };
    const std::vector<HermitianOp> terms = {embed(fhat.j_term), embed(fhat.k_term), embed(fhat.i_term)};
    u = trotter_exp(terms, -cfg.t0 / cfg.trotter_steps, cfg.trotter_steps);
  }

  // forward ladder: reading-register value x selects U^x on the solution register
  const double inv_sqrt_T = 1.0 / std::sqrt(static_cast<double>(T));
  CVector joint = CVector::Zero(T * d * 2);
  {
    CVector cur = ybar.amplitudes();
    for (Eigen::Index x = 0; x < T; ++x) {
      for (Eigen::Index r = 0; r < d; ++r) joint[(x * d + r) * 2] = cur[r] * inv_sqrt_T;
      if (x + 1 < T) cur = u * cur;
    }
  }
  detail::fourier_high_register(joint, t, -1);

  // conditional rotation: ancilla amplitude eps_kr / lambda_hat, sign kept
  bool any_reading_passes = false;
  for (Eigen::Index x = 0; x < T; ++x) {
    const double lambda_hat = decode_reading(x, t, cfg.t0);
    const double w_mag = eigenvalue_filter(lambda_hat, cfg.eps_kr);
    const double w = lambda_hat < 0.0 ? -w_mag : w_mag;
    if (w_mag > 0.0) any_reading_passes = true;
    const double keep = std::sqrt(std::max(0.0, 1.0 - w * w));
    for (Eigen::Index r = 0; r < d; ++r) {
      const Eigen::Index base = (x * d + r) * 2;
      const Complex a0 = joint[base];
      joint[base] = keep * a0;
      joint[base + 1] = w * a0;
    }
  }

  // uncompute: forward QFT, inverse ladder, Hadamards
  detail::fourier_high_register(joint, t, +1);
  {
    const CMatrix u_dag = u.adjoint();
    CMatrix power = CMatrix::Identity(d, d);  // (U^dagger)^x for block x
    CVector slice(d), mixed(d);
    for (Eigen::Index x = 0; x < T; ++x) {
      if (x > 0) power = power * u_dag;
      for (int anc = 0; anc < 2; ++anc) {
        for (Eigen::Index r = 0; r < d; ++r) slice[r] = joint[(x * d + r) * 2 + anc];
        mixed = power * slice;
        for (Eigen::Index r = 0; r < d; ++r) joint[(x * d + r) * 2 + anc] = mixed[r];
      }
    }
  }
  detail::hadamard_high_register(joint, t);

  double p_success = 0.0;
  for (Eigen::Index i = 1; i < joint.size(); i += 2) p_success += std::norm(joint[i]);

  QuantumSolveResult result;
  result.final_state = joint;
  result.success_probability = p_success;
  result.coarse_resolution_warning = !any_reading_passes;
  result.solution_qubits = sol_qubits;
  {
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> spec(fhat.matrix, Eigen::EigenvaluesOnly);
    const double max_abs = spec.eigenvalues().cwiseAbs().maxCoeff();
    result.wraparound_warning = max_abs * cfg.t0 / (2.0 * std::numbers::pi) > 0.5 + 1e-12;
  }

  if (ledger) ledger->qpe_qubits_used += static_cast<std::uint64_t>(t);
  if (p_success < 1e-6) {
    throw std::runtime_error("quantum_solve: post-selection probability below 1e-6 (filter removed all mass)");
  }
  result.postselect_attempts = static_cast<std::uint64_t>(std::ceil(1.0 / p_success - 1e-9));
  if (result.postselect_attempts > cfg.max_postselect_attempts) {
    throw std::runtime_error("quantum_solve: expected post-selection attempts exceed the configured cap");
  }
  if (ledger) ledger->measurement_shots += result.postselect_attempts;

  // reduced state of the solution register after post-selecting ancilla = 1
  CMatrix rho = CMatrix::Zero(d, d);
  CVector block(d);
  for (Eigen::Index x = 0; x < T; ++x) {
    for (Eigen::Index r = 0; r < d; ++r) block[r] = joint[(x * d + r) * 2 + 1];
    rho += block * block.adjoint();
  }
  rho /= p_success;

  const Eigen::SelfAdjointEigenSolver<CMatrix> es(rho);
  if (es.info() != Eigen::Success) throw std::runtime_error("quantum_solve: eigendecomposition failed");
  CVector principal = es.eigenvectors().col(d - 1);
  // fix the global phase so the dominant entry is real positive
  Eigen::Index top = 0;
  principal.cwiseAbs().maxCoeff(&top);
  const Complex ph = principal[top] / std::abs(principal[top]);
  principal *= std::conj(ph);
  principal /= principal.norm();

  result.solution = QState(sol_qubits, std::move(principal));
  return result;
}

}  // namespace qap
