#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qallpair/dataset.hpp"

namespace testsupport {

/// Hand-rolled Gaussian elimination with partial pivoting. Kept free of the
/// library's solve path so it can act as an independent oracle.
inline Eigen::VectorXd gauss_solve(Eigen::MatrixXd a, Eigen::VectorXd rhs) {
  const Eigen::Index n = a.rows();
  for (Eigen::Index col = 0; col < n; ++col) {
    Eigen::Index pivot = col;
    for (Eigen::Index r = col + 1; r < n; ++r) {
      if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
    }
    if (a(pivot, col) == 0.0) throw std::runtime_error("gauss_solve: singular matrix");
    if (pivot != col) {
      a.row(pivot).swap(a.row(col));
      std::swap(rhs[pivot], rhs[col]);
    }
    for (Eigen::Index r = col + 1; r < n; ++r) {
      const double factor = a(r, col) / a(col, col);
      a.row(r) -= factor * a.row(col);
      rhs[r] -= factor * rhs[col];
    }
  }
  Eigen::VectorXd x(n);
  for (Eigen::Index r = n - 1; r >= 0; --r) {
    double acc = rhs[r];
    for (Eigen::Index c = r + 1; c < n; ++c) acc -= a(r, c) * x[c];
    x[r] = acc / a(r, r);
  }
  return x;
}

/// Classical LS-SVM oracle: assembles [[0,1^T],[1,K+I/gamma]] and solves by
/// the elimination above. Returns (b, alpha...).
inline Eigen::VectorXd lssvm_oracle(const Eigen::MatrixXd& k, const Eigen::VectorXd& y, double gamma) {
  const Eigen::Index m = k.rows();
  Eigen::MatrixXd f = Eigen::MatrixXd::Zero(m + 1, m + 1);
  f.block(0, 1, 1, m).setOnes();
  f.block(1, 0, m, 1).setOnes();
  f.block(1, 1, m, m) = k + Eigen::MatrixXd::Identity(m, m) / gamma;
  Eigen::VectorXd rhs(m + 1);
  rhs[0] = 0.0;
  rhs.tail(m) = y;
  return gauss_solve(f, rhs);
}

inline Eigen::MatrixXd random_psd(Eigen::Index n, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = normal(rng);
  }
  return scale * (g * g.transpose()) / static_cast<double>(n);
}

inline Eigen::VectorXd random_vector(Eigen::Index n, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = normal(rng);
  return v;
}

/// Least-squares slope of log(err) vs log(x).
inline double fitted_slope(const std::vector<double>& x, const std::vector<double>& err) {
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(err[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// Seeded 2-d Gaussian blob dataset, n_per_class points for each of k classes.
inline qap::Dataset make_blobs(int k, int n_per_class, double sigma, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sigma);
  std::vector<qap::LabeledExample> examples;
  for (int c = 0; c < k; ++c) {
    const double angle = 2.0 * M_PI * c / k;
    const Eigen::Vector2d center(2.0 * std::cos(angle), 2.0 * std::sin(angle));
    for (int i = 0; i < n_per_class; ++i) {
      Eigen::VectorXd x(2);
      x << center.x() + noise(rng), center.y() + noise(rng);
      examples.push_back({x, c + 1});
    }
  }
  return qap::make_dataset(std::move(examples));
}

class TempFile {
 public:
  explicit TempFile(const std::string& contents, const std::string& name = "qallpair_test.csv") {
    path_ = (std::filesystem::temp_directory_path() / name).string();
    std::ofstream out(path_);
    out << contents;
  }
  ~TempFile() { std::remove(path_.c_str()); }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace testsupport
