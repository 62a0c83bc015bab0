#include "qallpair/model_io.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace qap {

namespace {

using nlohmann::json;

json kernel_to_json(const KernelSpec& kernel) {
  return json{{"kind", kernel.kind == KernelSpec::Kind::linear ? "linear" : "rbf"},
              {"sigma", kernel.sigma}};
}

KernelSpec kernel_from_json(const json& j) {
  KernelSpec k;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "linear") {
    k.kind = KernelSpec::Kind::linear;
  } else if (kind == "rbf") {
    k.kind = KernelSpec::Kind::rbf;
  } else {
    throw std::runtime_error("model file: unknown kernel kind '" + kind + "'");
  }
  k.sigma = j.at("sigma").get<double>();
  return k;
}

json model_entry(const LSSVMModel& m) {
  json entry;
  entry["f"] = m.f;
  entry["s"] = m.s;
  entry["b"] = m.b;
  entry["alpha"] = std::vector<double>(m.alpha.data(), m.alpha.data() + m.alpha.size());
  json xs = json::array();
  for (const auto& x : m.training_x) {
    xs.push_back(std::vector<double>(x.data(), x.data() + x.size()));
  }
  entry["x"] = xs;
  entry["y"] = std::vector<double>(m.binary_y.data(), m.binary_y.data() + m.binary_y.size());
  return entry;
}

LSSVMModel model_entry_from_json(const json& entry, const KernelSpec& kernel, double gamma) {
  LSSVMModel m;
  m.f = entry.at("f").get<int>();
  m.s = entry.at("s").get<int>();
  m.b = entry.at("b").get<double>();
  const auto alpha = entry.at("alpha").get<std::vector<double>>();
  m.alpha = Eigen::Map<const Eigen::VectorXd>(alpha.data(), static_cast<Eigen::Index>(alpha.size()));
  for (const auto& row : entry.at("x")) {
    const auto x = row.get<std::vector<double>>();
    m.training_x.push_back(
        Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size())));
  }
  const auto y = entry.at("y").get<std::vector<double>>();
  m.binary_y = Eigen::Map<const Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(y.size()));
  m.kernel = kernel;
  m.gamma = gamma;
  if (m.alpha.size() != static_cast<Eigen::Index>(m.training_x.size())) {
    throw std::runtime_error("model file: alpha / training vector count mismatch");
  }
  return m;
}

template <typename Ensemble>
json ensemble_to_json(const Ensemble& ens, const std::string& strategy) {
  json j;
  j["format_version"] = kModelFormatVersion;
  j["strategy"] = strategy;
  j["k"] = ens.k;
  j["d"] = ens.d;
  j["gamma"] = ens.gamma;
  j["kernel"] = kernel_to_json(ens.kernel);
  j["training_mode"] = ens.mode == TrainingMode::classical ? "classical" : "quantum";
  json labels = json::array();
  for (int c = 1; c <= ens.k; ++c) labels.push_back(std::to_string(c));
  j["label_mapping"] = labels;
  j["metadata"] = json{{"generator", kToolName},
                       {"normalized_features", ens.normalized_features},
                       {"padding", "zero-high"}};
  json models = json::array();
  for (const auto& m : ens.models) models.push_back(model_entry(m));
  j["models"] = models;
  return j;
}

template <typename Ensemble>
void ensemble_from_json(const json& j, Ensemble& ens) {
  ens.k = j.at("k").get<int>();
  ens.d = j.at("d").get<int>();
  ens.gamma = j.at("gamma").get<double>();
  ens.kernel = kernel_from_json(j.at("kernel"));
  ens.mode = j.at("training_mode").get<std::string>() == "quantum" ? TrainingMode::quantum
                                                                   : TrainingMode::classical;
  if (j.contains("metadata") && j.at("metadata").contains("normalized_features")) {
    ens.normalized_features = j.at("metadata").at("normalized_features").get<bool>();
  }
  for (const auto& entry : j.at("models")) {
    ens.models.push_back(model_entry_from_json(entry, ens.kernel, ens.gamma));
  }
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace

std::string model_to_json_string(const AllPairEnsemble& ens) {
  return ensemble_to_json(ens, "all-pair").dump(2) + "\n";
}

std::string model_to_json_string(const OneVsAllEnsemble& ens) {
  return ensemble_to_json(ens, "one-vs-all").dump(2) + "\n";
}

void save_model(const AllPairEnsemble& ens, const std::string& path) {
  write_file(path, model_to_json_string(ens));
}

void save_model(const OneVsAllEnsemble& ens, const std::string& path) {
  write_file(path, model_to_json_string(ens));
}

LoadedModel model_from_json_string(const std::string& text) {
  const json j = json::parse(text);
  const int version = j.at("format_version").get<int>();
  if (version != kModelFormatVersion) {
    throw std::runtime_error("model file: unsupported format version " + std::to_string(version));
  }
  LoadedModel loaded;
  loaded.strategy = j.at("strategy").get<std::string>();
  if (loaded.strategy == "all-pair") {
    ensemble_from_json(j, loaded.all_pair);
    const std::size_t expected =
        static_cast<std::size_t>(loaded.all_pair.k) * (loaded.all_pair.k - 1) / 2;
    if (loaded.all_pair.models.size() != expected) {
      throw std::runtime_error("model file: expected one model per class pair");
    }
  } else if (loaded.strategy == "one-vs-all") {
    ensemble_from_json(j, loaded.one_vs_all);
    if (loaded.one_vs_all.models.size() != static_cast<std::size_t>(loaded.one_vs_all.k)) {
      throw std::runtime_error("model file: expected one model per class");
    }
  } else {
    throw std::runtime_error("model file: unknown strategy '" + loaded.strategy + "'");
  }
  return loaded;
}

LoadedModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return model_from_json_string(text);
}

std::string trace_to_json_string(const PredictionTrace& trace) {
  json j;
  json pairs = json::array();
  for (const auto& p : trace.pair_probabilities) {
    pairs.push_back(json{{"f", p.f}, {"s", p.s}, {"p", p.p}, {"shots", p.shots_used}});
  }
  j["pair_probabilities"] = pairs;
  if (!trace.votes.votes.empty()) j["votes"] = trace.votes.votes;
  if (trace.scores.size() > 0) {
    j["scores"] = std::vector<double>(trace.scores.data(), trace.scores.data() + trace.scores.size());
  }
  j["chosen"] = trace.chosen;
  j["low_margin"] = trace.low_margin;
  j["ledger"] = json{{"grover_iterations", trace.ledger.grover_iterations},
                     {"oracle_queries", trace.ledger.oracle_queries},
                     {"measurement_shots", trace.ledger.measurement_shots},
                     {"qpe_qubits_used", trace.ledger.qpe_qubits_used}};
  return j.dump(2);
}

}  // namespace qap
