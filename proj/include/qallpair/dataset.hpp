#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qap {

/// One example: a real feature vector with an integer class id in 1..k.
struct LabeledExample {
  Eigen::VectorXd features;
  int label = 0;
};

/// Labeled dataset. Invariants: all feature vectors share dimension d, every
/// class in 1..k appears at least once, all entries are finite.
struct Dataset {
  std::vector<LabeledExample> examples;
  int k = 0;  ///< class count
  int d = 0;  ///< feature dimension
  std::size_t size() const { return examples.size(); }
};

/// Training subset for the pair classifier (f, s), f < s. Binary labels are
/// +1 for class f and -1 for class s.
struct PairSubset {
  int f = 0;
  int s = 0;
  std::vector<LabeledExample> examples;
  Eigen::VectorXd binary_labels;
  std::size_t size() const { return examples.size(); }
};

/// Validates the Dataset invariants (k from max label) and returns the dataset.
Dataset make_dataset(std::vector<LabeledExample> examples);

/// Loads a CSV with a header row naming the feature columns plus one column
/// named `label`. Features are decimal floating point, labels decimal
/// integers >= 1.
Dataset load_csv(const std::string& path);

/// One subset per unordered class pair, enumerated (1,2),(1,3),...,(k-1,k).
std::vector<PairSubset> pair_subsets(const Dataset& ds);

/// Scales every feature vector to Euclidean norm 1. Rejects zero vectors.
Dataset unit_normalize(const Dataset& ds);

}  // namespace qap
