#include "qallpair/statevector.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qap {

namespace {

constexpr double kNormTol = 1e-10;
constexpr double kUnitaryTol = 1e-10;
constexpr double kHermitianTol = 1e-12;

void check_qubit_count(int n_qubits) {
  if (n_qubits < 1) throw std::invalid_argument("state needs at least one qubit");
  if (n_qubits > kMaxQubits) {
    throw std::invalid_argument("qubit count " + std::to_string(n_qubits) + " exceeds cap " +
                                std::to_string(kMaxQubits));
  }
}

// Mask with the index-bit of each listed qubit set. Qubit q sits at bit n-1-q.
Eigen::Index qubit_mask(int n_qubits, const std::vector<int>& qubits) {
  Eigen::Index mask = 0;
  for (int q : qubits) {
    if (q < 0 || q >= n_qubits) throw std::invalid_argument("qubit index out of range");
    const Eigen::Index bit = Eigen::Index{1} << (n_qubits - 1 - q);
    if (mask & bit) throw std::invalid_argument("duplicate qubit index");
    mask |= bit;
  }
  return mask;
}

}  // namespace

QState::QState(int n_qubits, CVector amplitudes) : n_qubits_(n_qubits), amps_(std::move(amplitudes)) {
  check_qubit_count(n_qubits_);
  if (amps_.size() != (Eigen::Index{1} << n_qubits_)) {
    throw std::invalid_argument("amplitude vector length does not match qubit count");
  }
  if (std::abs(amps_.norm() - 1.0) > kNormTol) {
    throw std::invalid_argument("state is not normalized");
  }
}

QState QState::zero(int n_qubits) {
  check_qubit_count(n_qubits);
  CVector amps = CVector::Zero(Eigen::Index{1} << n_qubits);
  amps[0] = 1.0;
  return QState(n_qubits, std::move(amps));
}

HermitianOp::HermitianOp(CMatrix matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() == 0) {
    throw std::invalid_argument("operator must be square");
  }
  if ((matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol) {
    throw std::invalid_argument("operator is not Hermitian");
  }
  qubits_ = detail::qubits_for(matrix_.rows());
  if ((Eigen::Index{1} << qubits_) != matrix_.rows()) {
    throw std::invalid_argument("operator dimension must be a power of two");
  }
}

HermitianOp::HermitianOp(const Eigen::MatrixXd& matrix) : HermitianOp(CMatrix(matrix.cast<Complex>())) {}

QState amplitude_encode(const CVector& v) {
  if (v.size() < 1) throw std::invalid_argument("amplitude_encode: empty vector");
  const double norm = v.norm();
  if (norm == 0.0) throw std::invalid_argument("amplitude_encode: zero vector");
  const int n = detail::qubits_for(v.size());
  CVector amps = CVector::Zero(Eigen::Index{1} << n);
  amps.head(v.size()) = v / norm;
  return QState(n, std::move(amps));
}

QState amplitude_encode(const Eigen::VectorXd& v) { return amplitude_encode(CVector(v.cast<Complex>())); }

namespace gates {

CMatrix hadamard() {
  CMatrix h(2, 2);
  const double s = 1.0 / std::numbers::sqrt2;
  h << s, s, s, -s;
  return h;
}

CMatrix pauli_x() {
  CMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

CMatrix pauli_y() {
  CMatrix m(2, 2);
  m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
  return m;
}

CMatrix pauli_z() {
  CMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

CMatrix rotation_y(double theta) {
  CMatrix m(2, 2);
  m << std::cos(theta / 2), -std::sin(theta / 2), std::sin(theta / 2), std::cos(theta / 2);
  return m;
}

CMatrix swap() {
  CMatrix m = CMatrix::Identity(4, 4);
  m(1, 1) = 0;
  m(2, 2) = 0;
  m(1, 2) = 1;
  m(2, 1) = 1;
  return m;
}

}  // namespace gates

QState apply_gate(const QState& q, const CMatrix& unitary, const std::vector<int>& targets,
                  const std::vector<int>& controls) {
  const int n = q.n_qubits();
  const int k = static_cast<int>(targets.size());
  if (k == 0) throw std::invalid_argument("apply_gate: no target qubits");
  if (unitary.rows() != unitary.cols() || unitary.rows() != (Eigen::Index{1} << k)) {
    throw std::invalid_argument("apply_gate: matrix dimension does not match target count");
  }
  if (!detail::is_unitary(unitary, kUnitaryTol)) {
    throw std::invalid_argument("apply_gate: matrix is not unitary");
  }
  const Eigen::Index target_mask = qubit_mask(n, targets);
  const Eigen::Index control_mask = qubit_mask(n, controls);
  if (target_mask & control_mask) throw std::invalid_argument("apply_gate: target/control collision");

  // bit of target j inside the gate's own index space (row-major, qubit order)
  std::vector<Eigen::Index> target_bits(targets.size());
  for (int j = 0; j < k; ++j) {
    target_bits[static_cast<std::size_t>(j)] = Eigen::Index{1} << (n - 1 - targets[static_cast<std::size_t>(j)]);
  }

  const Eigen::Index dim = q.dim();
  const Eigen::Index sub_dim = Eigen::Index{1} << k;
  CVector out = q.amplitudes();
  CVector gathered(sub_dim);
  for (Eigen::Index base = 0; base < dim; ++base) {
    if (base & target_mask) continue;                        // enumerate target-cleared indices once
    if ((base & control_mask) != control_mask) continue;     // controls must all be set
    for (Eigen::Index a = 0; a < sub_dim; ++a) {
      Eigen::Index idx = base;
      for (int j = 0; j < k; ++j) {
        if (a & (Eigen::Index{1} << (k - 1 - j))) idx |= target_bits[static_cast<std::size_t>(j)];
      }
      gathered[a] = q.amplitudes()[idx];
    }
    const CVector mixed = unitary * gathered;
    for (Eigen::Index a = 0; a < sub_dim; ++a) {
      Eigen::Index idx = base;
      for (int j = 0; j < k; ++j) {
        if (a & (Eigen::Index{1} << (k - 1 - j))) idx |= target_bits[static_cast<std::size_t>(j)];
      }
      out[idx] = mixed[a];
    }
  }
  return QState(n, std::move(out));
}

MeasurementRecord measure(const QState& q, int qubit, std::mt19937_64& rng) {
  const double p1 = probability_of(q, qubit, 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int outcome = unit(rng) < p1 ? 1 : 0;
  const double p = outcome == 1 ? p1 : 1.0 - p1;

  const Eigen::Index bit = Eigen::Index{1} << (q.n_qubits() - 1 - qubit);
  CVector post = q.amplitudes();
  for (Eigen::Index i = 0; i < post.size(); ++i) {
    const bool is_one = (i & bit) != 0;
    if (is_one != (outcome == 1)) post[i] = 0.0;
  }
  post /= std::sqrt(p);
  return MeasurementRecord{outcome, p, QState(q.n_qubits(), std::move(post))};
}

double probability_of(const QState& q, int qubit, int outcome) {
  if (qubit < 0 || qubit >= q.n_qubits()) throw std::invalid_argument("qubit index out of range");
  if (outcome != 0 && outcome != 1) throw std::invalid_argument("outcome must be 0 or 1");
  const Eigen::Index bit = Eigen::Index{1} << (q.n_qubits() - 1 - qubit);
  double p = 0.0;
  for (Eigen::Index i = 0; i < q.dim(); ++i) {
    if (((i & bit) != 0) == (outcome == 1)) p += std::norm(q.amplitudes()[i]);
  }
  return p;
}

Eigen::Index sample_index(const QState& q, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double u = unit(rng);
  double acc = 0.0;
  const Eigen::Index dim = q.dim();
  for (Eigen::Index i = 0; i < dim; ++i) {
    acc += std::norm(q.amplitudes()[i]);
    if (u < acc) return i;
  }
  return dim - 1;
}

CMatrix evolution_unitary(const HermitianOp& h, double t) {
  const Eigen::SelfAdjointEigenSolver<CMatrix> es(h.matrix());
  if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  const Eigen::Index d = h.matrix().rows();
  CVector phases(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    phases[i] = std::exp(Complex(0.0, -es.eigenvalues()[i] * t));
  }
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

QState evolve(const QState& q, const HermitianOp& h, double t, const std::vector<int>& targets) {
  return apply_gate(q, evolution_unitary(h, t), targets);
}

QState evolve(const QState& q, const HermitianOp& h, double t) {
  std::vector<int> all(static_cast<std::size_t>(q.n_qubits()));
  for (int i = 0; i < q.n_qubits(); ++i) all[static_cast<std::size_t>(i)] = i;
  return evolve(q, h, t, all);
}

CMatrix trotter_exp(const std::vector<HermitianOp>& terms, double dt, int steps) {
  if (terms.empty()) throw std::invalid_argument("trotter_exp: no terms");
  if (steps < 1) throw std::invalid_argument("trotter_exp: steps must be >= 1");
  const Eigen::Index d = terms.front().matrix().rows();
  CMatrix step = CMatrix::Identity(d, d);
  for (const auto& term : terms) {
    if (term.matrix().rows() != d) throw std::invalid_argument("trotter_exp: dimension mismatch");
    step = step * evolution_unitary(term, dt);
  }
  // binary exponentiation of the single-step unitary
  CMatrix result = CMatrix::Identity(d, d);
  CMatrix base = step;
  int e = steps;
  while (e > 0) {
    if (e & 1) result = result * base;
    base = base * base;
    e >>= 1;
  }
  return result;
}

QState uniform_superposition(Eigen::Index n_states) {
  if (n_states < 1) throw std::invalid_argument("uniform_superposition: need at least one state");
  const int n = detail::qubits_for(n_states);
  CVector amps = CVector::Zero(Eigen::Index{1} << n);
  amps.head(n_states).setConstant(1.0 / std::sqrt(static_cast<double>(n_states)));
  return QState(n, std::move(amps));
}

QState grover_iterate(const QState& q, const std::function<bool(Eigen::Index)>& marked,
                      int iterations, Eigen::Index search_size, ResourceLedger* ledger) {
  if (iterations < 0) throw std::invalid_argument("grover_iterate: negative iteration count");
  if (search_size < 1 || search_size > q.dim()) {
    throw std::invalid_argument("grover_iterate: search size out of range");
  }
  std::vector<char> mask(static_cast<std::size_t>(search_size));
  for (Eigen::Index i = 0; i < search_size; ++i) mask[static_cast<std::size_t>(i)] = marked(i) ? 1 : 0;

  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(search_size));
  CVector amps = q.amplitudes();
  for (int it = 0; it < iterations; ++it) {
    for (Eigen::Index i = 0; i < search_size; ++i) {
      if (mask[static_cast<std::size_t>(i)]) amps[i] = -amps[i];
    }
    Complex overlap = 0.0;
    for (Eigen::Index i = 0; i < search_size; ++i) overlap += amps[i];
    overlap *= inv_sqrt_n;
    for (Eigen::Index i = 0; i < q.dim(); ++i) {
      const Complex proj = i < search_size ? 2.0 * overlap * inv_sqrt_n : Complex(0.0);
      amps[i] = proj - amps[i];
    }
  }
  if (ledger) {
    ledger->grover_iterations += static_cast<std::uint64_t>(iterations);
    ledger->oracle_queries += static_cast<std::uint64_t>(iterations);
  }
  return QState(q.n_qubits(), std::move(amps));
}

Eigen::VectorXd phase_estimate(const CMatrix& unitary, const QState& input, int precision_qubits,
                               ResourceLedger* ledger) {
  if (precision_qubits < 1) throw std::invalid_argument("phase_estimate: need at least one reading qubit");
  if (unitary.rows() != unitary.cols() || unitary.rows() != input.dim()) {
    throw std::invalid_argument("phase_estimate: dimension mismatch");
  }
  if (!detail::is_unitary(unitary, kUnitaryTol)) {
    throw std::invalid_argument("phase_estimate: matrix is not unitary");
  }
  if (ledger) ledger->qpe_qubits_used += static_cast<std::uint64_t>(precision_qubits);
  return detail::qpe_distribution([&unitary](CVector& v) { v = unitary * v; }, input.amplitudes(),
                                  precision_qubits);
}

double state_fidelity(const CVector& a, const CVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("state_fidelity: dimension mismatch");
  return std::norm(a.dot(b)) / (a.squaredNorm() * b.squaredNorm());
}

namespace detail {

int qubits_for(Eigen::Index size) {
  int n = 1;
  while ((Eigen::Index{1} << n) < size) ++n;
  return n;
}

bool is_unitary(const CMatrix& m, double tol) {
  const CMatrix gram = m.adjoint() * m;
  return (gram - CMatrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff() <= tol;
}

void fourier_high_register(CVector& amps, int t, int sign) {
  const Eigen::Index T = Eigen::Index{1} << t;
  const Eigen::Index block = amps.size() / T;
  if (block * T != amps.size()) throw std::invalid_argument("register width mismatch");

  // bit-reversal permutation over the top register
  for (Eigen::Index x = 1, rx = 0; x < T; ++x) {
    Eigen::Index bit = T >> 1;
    for (; rx & bit; bit >>= 1) rx ^= bit;
    rx ^= bit;
    if (x < rx) {
      for (Eigen::Index j = 0; j < block; ++j) std::swap(amps[x * block + j], amps[rx * block + j]);
    }
  }
  for (Eigen::Index len = 2; len <= T; len <<= 1) {
    const double ang = static_cast<double>(sign) * 2.0 * std::numbers::pi / static_cast<double>(len);
    const Complex wlen(std::cos(ang), std::sin(ang));
    for (Eigen::Index x0 = 0; x0 < T; x0 += len) {
      Complex w(1.0, 0.0);
      for (Eigen::Index p = 0; p < len / 2; ++p) {
        for (Eigen::Index j = 0; j < block; ++j) {
          const Complex u = amps[(x0 + p) * block + j];
          const Complex v = amps[(x0 + p + len / 2) * block + j] * w;
          amps[(x0 + p) * block + j] = u + v;
          amps[(x0 + p + len / 2) * block + j] = u - v;
        }
        w *= wlen;
      }
    }
  }
  amps /= std::sqrt(static_cast<double>(T));
}

void hadamard_high_register(CVector& amps, int t) {
  const Eigen::Index T = Eigen::Index{1} << t;
  const Eigen::Index block = amps.size() / T;
  if (block * T != amps.size()) throw std::invalid_argument("register width mismatch");
  for (Eigen::Index half = 1; half < T; half <<= 1) {
    for (Eigen::Index x0 = 0; x0 < T; x0 += 2 * half) {
      for (Eigen::Index p = 0; p < half; ++p) {
        for (Eigen::Index j = 0; j < block; ++j) {
          const Complex u = amps[(x0 + p) * block + j];
          const Complex v = amps[(x0 + p + half) * block + j];
          amps[(x0 + p) * block + j] = u + v;
          amps[(x0 + p + half) * block + j] = u - v;
        }
      }
    }
  }
  amps /= std::sqrt(static_cast<double>(T));
}

Eigen::VectorXd qpe_distribution(const std::function<void(CVector&)>& apply_u, const CVector& input,
                                 int t) {
  const Eigen::Index T = Eigen::Index{1} << t;
  const Eigen::Index d = input.size();
  const double inv_sqrt_T = 1.0 / std::sqrt(static_cast<double>(T));

  // reading register (top) starts in uniform superposition; block x holds U^x |input>
  CVector joint(T * d);
  CVector cur = input;
  for (Eigen::Index x = 0; x < T; ++x) {
    joint.segment(x * d, d) = cur * inv_sqrt_T;
    if (x + 1 < T) apply_u(cur);
  }
  fourier_high_register(joint, t, -1);

  Eigen::VectorXd dist(T);
  for (Eigen::Index y = 0; y < T; ++y) dist[y] = joint.segment(y * d, d).squaredNorm();
  return dist;
}

}  // namespace detail

}  // namespace qap
