#include "qallpair/lssvm.hpp"

#include <cmath>
#include <stdexcept>

namespace qap {

double kernel_eval(const KernelSpec& kernel, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size()) throw std::invalid_argument("kernel_eval: dimension mismatch");
  switch (kernel.kind) {
    case KernelSpec::Kind::linear:
      return a.dot(b);
    case KernelSpec::Kind::rbf: {
      if (kernel.sigma <= 0.0) throw std::invalid_argument("rbf kernel requires sigma > 0");
      const double d2 = (a - b).squaredNorm();
      return std::exp(-d2 / (2.0 * kernel.sigma * kernel.sigma));
    }
  }
  throw std::logic_error("unknown kernel kind");
}

GramMatrix gram_matrix(const std::vector<LabeledExample>& examples, const KernelSpec& kernel) {
  if (examples.empty()) throw std::invalid_argument("gram_matrix: empty subset");
  const Eigen::Index m = static_cast<Eigen::Index>(examples.size());
  const Eigen::Index d = examples.front().features.size();
  for (const auto& ex : examples) {
    if (ex.features.size() != d) throw std::invalid_argument("gram_matrix: dimension mismatch");
  }
  GramMatrix g;
  g.entries.resize(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i; j < m; ++j) {
      const double v = kernel_eval(kernel, examples[static_cast<std::size_t>(i)].features,
                                   examples[static_cast<std::size_t>(j)].features);
      g.entries(i, j) = v;
      g.entries(j, i) = v;
    }
  }
  return g;
}

GramMatrix gram_matrix(const PairSubset& subset, const KernelSpec& kernel) {
  return gram_matrix(subset.examples, kernel);
}

LSSVMModel solve_lssvm(const GramMatrix& K, const Eigen::VectorXd& y, double gamma) {
  const Eigen::Index m = K.size();
  if (gamma <= 0.0) throw std::invalid_argument("solve_lssvm: gamma must be positive");
  if (y.size() != m) throw std::invalid_argument("solve_lssvm: label length mismatch");
  for (Eigen::Index i = 0; i < m; ++i) {
    if (y[i] != 1.0 && y[i] != -1.0) throw std::invalid_argument("solve_lssvm: labels must be +-1");
  }

  Eigen::MatrixXd F = Eigen::MatrixXd::Zero(m + 1, m + 1);
  F.block(0, 1, 1, m).setOnes();
  F.block(1, 0, m, 1).setOnes();
  F.block(1, 1, m, m) = K.entries + Eigen::MatrixXd::Identity(m, m) / gamma;

  Eigen::VectorXd rhs(m + 1);
  rhs[0] = 0.0;
  rhs.tail(m) = y;

  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(F);
  const Eigen::VectorXd z = lu.solve(rhs);

  const double residual = (F * z - rhs).norm();
  if (!z.allFinite() || residual > 1e-8 * rhs.norm()) {
    throw std::runtime_error("solve_lssvm: system is singular or badly conditioned");
  }

  LSSVMModel model;
  model.b = z[0];
  model.alpha = z.tail(m);
  model.gamma = gamma;
  model.binary_y = y;
  return model;
}

LSSVMModel train_pair_model(const PairSubset& subset, const KernelSpec& kernel, double gamma) {
  LSSVMModel model = solve_lssvm(gram_matrix(subset, kernel), subset.binary_labels, gamma);
  model.kernel = kernel;
  model.f = subset.f;
  model.s = subset.s;
  model.training_x.reserve(subset.size());
  for (const auto& ex : subset.examples) model.training_x.push_back(ex.features);
  return model;
}

double decision(const LSSVMModel& model, const Eigen::VectorXd& x) {
  if (!model.training_x.empty() && x.size() != model.training_x.front().size()) {
    throw std::invalid_argument("decision: dimension mismatch");
  }
  double margin = model.b;
  for (Eigen::Index l = 0; l < model.alpha.size(); ++l) {
    margin += model.alpha[l] * kernel_eval(model.kernel, model.training_x[static_cast<std::size_t>(l)], x);
  }
  return margin;
}

int classify_binary(const LSSVMModel& model, const Eigen::VectorXd& x) {
  return decision(model, x) > 0.0 ? 1 : -1;
}

}  // namespace qap
