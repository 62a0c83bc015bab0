#pragma once

#include <vector>

#include <Eigen/Dense>

#include "qallpair/dataset.hpp"

namespace qap {

struct KernelSpec {
  enum class Kind { linear, rbf };
  Kind kind = Kind::linear;
  double sigma = 1.0;  ///< rbf width: K(x,z) = exp(-|x-z|^2 / (2 sigma^2))
};

double kernel_eval(const KernelSpec& kernel, const Eigen::VectorXd& a, const Eigen::VectorXd& b);

/// Kernel matrix K_ij = K(x_i, x_j). Symmetric, PSD up to roundoff.
struct GramMatrix {
  Eigen::MatrixXd entries;
  Eigen::Index size() const { return entries.rows(); }
};

GramMatrix gram_matrix(const std::vector<LabeledExample>& examples, const KernelSpec& kernel);
GramMatrix gram_matrix(const PairSubset& subset, const KernelSpec& kernel);

/// A solved binary classifier: offset b and multipliers alpha satisfying
///   [[0, 1^T], [1, K + gamma^-1 I]] (b, alpha) = (0, y),
/// together with the training vectors needed to evaluate the decision value.
struct LSSVMModel {
  double b = 0.0;
  Eigen::VectorXd alpha;
  double gamma = 1.0;
  KernelSpec kernel;
  int f = 0;  ///< class mapped to +1
  int s = 0;  ///< class mapped to -1 (0 in one-vs-rest models)
  std::vector<Eigen::VectorXd> training_x;
  Eigen::VectorXd binary_y;
};

/// Dense direct solve with partial pivoting. b, alpha, gamma are filled in;
/// kernel/pair/training data are the caller's to attach.
LSSVMModel solve_lssvm(const GramMatrix& K, const Eigen::VectorXd& y, double gamma);

/// gram_matrix + solve_lssvm + bookkeeping for one pair subset.
LSSVMModel train_pair_model(const PairSubset& subset, const KernelSpec& kernel, double gamma);

/// Pre-sign margin f(x) = sum_l alpha_l K(x_l, x) + b.
double decision(const LSSVMModel& model, const Eigen::VectorXd& x);

/// sign(decision), with sign(0) = -1.
int classify_binary(const LSSVMModel& model, const Eigen::VectorXd& x);

}  // namespace qap
