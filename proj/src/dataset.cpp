#include "qallpair/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qap {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) {
    // trim surrounding whitespace and a trailing CR from DOS line endings
    std::size_t a = field.find_first_not_of(" \t\r");
    std::size_t b = field.find_last_not_of(" \t\r");
    out.push_back(a == std::string::npos ? std::string() : field.substr(a, b - a + 1));
  }
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

double parse_double(const std::string& tok, std::size_t row, const std::string& col) {
  const char* begin = tok.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (tok.empty() || end != begin + tok.size()) {
    throw std::runtime_error("row " + std::to_string(row) + ": non-numeric feature in column " +
                             col + ": '" + tok + "'");
  }
  return v;
}

int parse_label(const std::string& tok, std::size_t row) {
  const char* begin = tok.c_str();
  char* end = nullptr;
  long v = std::strtol(begin, &end, 10);
  if (tok.empty() || end != begin + tok.size()) {
    throw std::runtime_error("row " + std::to_string(row) + ": non-integer label '" + tok + "'");
  }
  if (v < 1) {
    throw std::runtime_error("row " + std::to_string(row) + ": label " + std::to_string(v) +
                             " out of range (labels start at 1)");
  }
  return static_cast<int>(v);
}

}  // namespace

Dataset make_dataset(std::vector<LabeledExample> examples) {
  if (examples.empty()) throw std::runtime_error("no examples");
  Dataset ds;
  ds.d = static_cast<int>(examples.front().features.size());
  if (ds.d <= 0) throw std::runtime_error("feature dimension must be positive");
  int k = 0;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const auto& ex = examples[i];
    if (ex.features.size() != ds.d) {
      throw std::runtime_error("example " + std::to_string(i) + ": dimension " +
                               std::to_string(ex.features.size()) + " != " + std::to_string(ds.d));
    }
    if (!ex.features.allFinite()) {
      throw std::runtime_error("example " + std::to_string(i) + ": non-finite feature");
    }
    if (ex.label < 1) {
      throw std::runtime_error("example " + std::to_string(i) + ": label out of range");
    }
    k = std::max(k, ex.label);
  }
  std::vector<int> counts(static_cast<std::size_t>(k) + 1, 0);
  for (const auto& ex : examples) counts[static_cast<std::size_t>(ex.label)]++;
  for (int c = 1; c <= k; ++c) {
    if (counts[static_cast<std::size_t>(c)] == 0) {
      throw std::runtime_error("class " + std::to_string(c) + " unrepresented");
    }
  }
  ds.k = k;
  ds.examples = std::move(examples);
  return ds;
}

Dataset load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("no examples");
  const std::vector<std::string> header = split_csv_line(line);
  std::ptrdiff_t label_col = -1;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == "label") {
      if (label_col >= 0) throw std::runtime_error("duplicate label column");
      label_col = static_cast<std::ptrdiff_t>(c);
    }
  }
  if (label_col < 0) throw std::runtime_error("header has no 'label' column");
  const std::size_t d = header.size() - 1;
  if (d == 0) throw std::runtime_error("header has no feature columns");

  std::vector<LabeledExample> examples;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw std::runtime_error("row " + std::to_string(row) + ": expected " +
                               std::to_string(header.size()) + " fields, got " +
                               std::to_string(fields.size()));
    }
    LabeledExample ex;
    ex.features.resize(static_cast<Eigen::Index>(d));
    Eigen::Index j = 0;
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (static_cast<std::ptrdiff_t>(c) == label_col) {
        ex.label = parse_label(fields[c], row);
      } else {
        ex.features[j++] = parse_double(fields[c], row, header[c]);
      }
    }
    if (!ex.features.allFinite()) {
      throw std::runtime_error("row " + std::to_string(row) + ": non-finite feature");
    }
    examples.push_back(std::move(ex));
  }
  if (examples.empty()) throw std::runtime_error("no examples");
  return make_dataset(std::move(examples));
}

std::vector<PairSubset> pair_subsets(const Dataset& ds) {
  std::vector<PairSubset> subsets;
  subsets.reserve(static_cast<std::size_t>(ds.k) * (ds.k - 1) / 2);
  for (int f = 1; f <= ds.k; ++f) {
    for (int s = f + 1; s <= ds.k; ++s) {
      PairSubset sub;
      sub.f = f;
      sub.s = s;
      std::vector<double> y;
      for (const auto& ex : ds.examples) {
        if (ex.label == f || ex.label == s) {
          sub.examples.push_back(ex);
          y.push_back(ex.label == f ? 1.0 : -1.0);
        }
      }
      sub.binary_labels = Eigen::Map<Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(y.size()));
      subsets.push_back(std::move(sub));
    }
  }
  return subsets;
}

Dataset unit_normalize(const Dataset& ds) {
  std::vector<LabeledExample> out;
  out.reserve(ds.size());
  for (std::size_t i = 0; i < ds.examples.size(); ++i) {
    const auto& ex = ds.examples[i];
    const double n = ex.features.norm();
    if (n == 0.0) {
      throw std::runtime_error("example " + std::to_string(i) + ": zero feature vector");
    }
    out.push_back({ex.features / n, ex.label});
  }
  return make_dataset(std::move(out));
}

}  // namespace qap
