#pragma once

#include <string>

#include "qallpair/multiclass.hpp"

namespace qap {

inline constexpr int kModelFormatVersion = 1;
inline constexpr const char* kToolName = "qallpair 0.1.0";

/// JSON model files round-trip losslessly: save -> load -> identical predictions.
void save_model(const AllPairEnsemble& ens, const std::string& path);
void save_model(const OneVsAllEnsemble& ens, const std::string& path);

struct LoadedModel {
  std::string strategy;  ///< "all-pair" or "one-vs-all"
  AllPairEnsemble all_pair;
  OneVsAllEnsemble one_vs_all;
  bool is_all_pair() const { return strategy == "all-pair"; }
};

LoadedModel load_model(const std::string& path);

std::string model_to_json_string(const AllPairEnsemble& ens);
std::string model_to_json_string(const OneVsAllEnsemble& ens);
LoadedModel model_from_json_string(const std::string& text);

std::string trace_to_json_string(const PredictionTrace& trace);

}  // namespace qap
