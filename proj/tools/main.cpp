// Command-line front end: training, prediction, evaluation, algorithm demos,
// and scaling benchmarks. Exit codes: 0 success, 1 runtime failure,
// 2 usage/configuration error.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qallpair/model_io.hpp"
#include "qallpair/multiclass.hpp"
#include "qallpair/rng.hpp"

namespace {

using namespace qap;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag, bool required,
                           const char* why) {
  if (flag) return *flag;
  if (const char* env = std::getenv("QALLPAIR_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0') return v;
    throw UsageError("QALLPAIR_SEED is not an integer");
  }
  if (required) {
    throw UsageError(std::string("--seed (or QALLPAIR_SEED) is required for ") + why);
  }
  return 0;
}

KernelSpec make_kernel(const std::string& name, double sigma) {
  KernelSpec k;
  if (name == "linear") {
    k.kind = KernelSpec::Kind::linear;
  } else if (name == "rbf") {
    k.kind = KernelSpec::Kind::rbf;
  } else {
    throw UsageError("unknown kernel '" + name + "'");
  }
  if (k.kind == KernelSpec::Kind::rbf && sigma <= 0.0) {
    throw UsageError("--sigma must be positive for the rbf kernel");
  }
  k.sigma = sigma;
  return k;
}

// Feature rows for prediction; a `label` column, when present, is ignored.
std::vector<Eigen::VectorXd> load_feature_rows(const std::string& path, int expected_d) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("no examples");
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      while (!tok.empty() && (tok.back() == '\r' || tok.back() == ' ')) tok.pop_back();
      header.push_back(tok);
    }
  }
  std::ptrdiff_t label_col = -1;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == "label") label_col = static_cast<std::ptrdiff_t>(c);
  }
  const std::size_t d = header.size() - (label_col >= 0 ? 1 : 0);
  if (static_cast<int>(d) != expected_d) {
    throw std::runtime_error("input has " + std::to_string(d) + " feature columns, model expects " +
                             std::to_string(expected_d));
  }
  std::vector<Eigen::VectorXd> rows;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::stringstream ss(line);
    std::string tok;
    std::vector<std::string> fields;
    while (std::getline(ss, tok, ',')) {
      while (!tok.empty() && (tok.back() == '\r' || tok.back() == ' ')) tok.pop_back();
      fields.push_back(tok);
    }
    if (fields.size() != header.size()) {
      throw std::runtime_error("row " + std::to_string(row) + ": expected " +
                               std::to_string(header.size()) + " fields, got " +
                               std::to_string(fields.size()));
    }
    Eigen::VectorXd x(static_cast<Eigen::Index>(d));
    Eigen::Index j = 0;
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (static_cast<std::ptrdiff_t>(c) == label_col) continue;
      char* end = nullptr;
      const double v = std::strtod(fields[c].c_str(), &end);
      if (fields[c].empty() || end != fields[c].c_str() + fields[c].size()) {
        throw std::runtime_error("row " + std::to_string(row) + ": non-numeric value '" + fields[c] +
                                 "'");
      }
      x[j++] = v;
    }
    rows.push_back(std::move(x));
  }
  return rows;
}

void print_ledger(const ResourceLedger& ledger) {
  std::cout << "ledger: grover_iterations=" << ledger.grover_iterations
            << " oracle_queries=" << ledger.oracle_queries
            << " measurement_shots=" << ledger.measurement_shots
            << " qpe_qubits_used=" << ledger.qpe_qubits_used << "\n";
}

// ---------------------------------------------------------------- train ---

struct TrainArgs {
  std::string data;
  std::string out;
  std::string strategy = "all-pair";
  std::string mode = "classical";
  std::string kernel = "linear";
  double sigma = 1.0;
  double gamma = 1.0;
  bool normalize = false;
  int precision_qubits = 9;
  double eps_kr = 1.0 / 16.0;
  double t0 = std::numbers::pi;
  int trotter_steps = 0;
  std::optional<std::uint64_t> seed;
};

int run_train(const TrainArgs& args) {
  TrainConfig cfg;
  cfg.gamma = args.gamma;
  cfg.kernel = make_kernel(args.kernel, args.sigma);
  if (args.mode == "classical") {
    cfg.mode = TrainingMode::classical;
  } else if (args.mode == "quantum") {
    cfg.mode = TrainingMode::quantum;
  } else {
    throw UsageError("--mode must be classical or quantum");
  }
  if (args.gamma <= 0.0) throw UsageError("--gamma must be positive");
  cfg.inversion.precision_qubits = args.precision_qubits;
  cfg.inversion.eps_kr = args.eps_kr;
  cfg.inversion.t0 = args.t0;
  if (args.trotter_steps > 0) {
    cfg.inversion.evolution = EvolutionKind::trotter;
    cfg.inversion.trotter_steps = args.trotter_steps;
  }
  cfg.seed = resolve_seed(args.seed, cfg.mode == TrainingMode::quantum, "quantum training");

  Dataset ds = load_csv(args.data);
  if (args.normalize) ds = unit_normalize(ds);

  std::cout << "loaded " << ds.size() << " examples, k=" << ds.k << ", d=" << ds.d << "\n";
  if (args.strategy == "all-pair") {
    AllPairEnsemble ens = train_all_pair(ds, cfg);
    ens.normalized_features = args.normalize;
    save_model(ens, args.out);
    std::cout << "trained " << ens.models.size() << " pair classifiers ("
              << (cfg.mode == TrainingMode::classical ? "classical" : "quantum") << " mode)\n";
    if (cfg.mode == TrainingMode::quantum) {
      for (const auto& info : ens.training_info) {
        std::cout << "  pair (" << info.f << "," << info.s << "): success_probability="
                  << std::setprecision(6) << std::fixed << info.success_probability
                  << " attempts=" << info.postselect_attempts << std::defaultfloat << "\n";
      }
    }
  } else if (args.strategy == "one-vs-all") {
    OneVsAllEnsemble ens = train_one_vs_all(ds, cfg);
    ens.normalized_features = args.normalize;
    save_model(ens, args.out);
    std::cout << "trained " << ens.models.size() << " one-vs-rest classifiers ("
              << (cfg.mode == TrainingMode::classical ? "classical" : "quantum") << " mode)\n";
  } else {
    throw UsageError("--strategy must be all-pair or one-vs-all");
  }
  std::cout << "model written to " << args.out << "\n";
  return kExitOk;
}

// ------------------------------------------------------ predict/evaluate ---

struct PredictArgs {
  std::string model;
  std::string data;
  std::string probability = "exact";
  std::uint64_t shots = 0;
  double eps = 0.01;
  std::string mode_finder = "classical";
  double mode_eps = 0.1;
  double mode_delta = 0.1;
  int count_precision = 9;
  double budget_multiplier = 1.0;
  std::string trace_out;
  std::string csv_out;
  std::optional<std::uint64_t> seed;
};

PredictConfig make_predict_config(const PredictArgs& args) {
  PredictConfig cfg;
  if (args.probability == "exact") {
    cfg.probability_mode = ProbabilityMode::exact;
  } else if (args.probability == "sampled") {
    cfg.probability_mode = ProbabilityMode::sampled;
  } else {
    throw UsageError("--probability must be exact or sampled");
  }
  cfg.shots = args.shots;
  cfg.shot_eps = args.eps;
  if (args.mode_finder == "classical") {
    cfg.mode_finder = ModeFinder::classical;
  } else if (args.mode_finder == "quantum") {
    cfg.mode_finder = ModeFinder::quantum;
  } else {
    throw UsageError("--mode-finder must be classical or quantum");
  }
  cfg.mode_eps = args.mode_eps;
  cfg.mode_delta = args.mode_delta;
  cfg.count_precision_qubits = args.count_precision;
  cfg.budget_multiplier = args.budget_multiplier;
  return cfg;
}

bool needs_seed(const PredictConfig& cfg) {
  return cfg.probability_mode == ProbabilityMode::sampled || cfg.mode_finder == ModeFinder::quantum;
}

int run_predict(const PredictArgs& args) {
  const PredictConfig cfg = make_predict_config(args);
  const std::uint64_t seed = resolve_seed(args.seed, needs_seed(cfg), "sampled or quantum prediction");
  const LoadedModel loaded = load_model(args.model);

  const int d = loaded.is_all_pair() ? loaded.all_pair.d : loaded.one_vs_all.d;
  const bool normalize =
      loaded.is_all_pair() ? loaded.all_pair.normalized_features : loaded.one_vs_all.normalized_features;
  const std::vector<Eigen::VectorXd> rows = load_feature_rows(args.data, d);

  std::vector<std::string> traces;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    Eigen::VectorXd x = rows[i];
    if (normalize) {
      const double n = x.norm();
      if (n == 0.0) throw std::runtime_error("row " + std::to_string(i + 2) + ": zero feature vector");
      x /= n;
    }
    const std::uint64_t row_seed = derive_seed(seed, 1000003ULL + i);
    const auto [predicted, trace] = loaded.is_all_pair()
                                        ? predict_all_pair(loaded.all_pair, x, cfg, row_seed)
                                        : predict_one_vs_all(loaded.one_vs_all, x, cfg, row_seed);
    std::cout << predicted << "\n";
    if (!args.trace_out.empty()) traces.push_back(trace_to_json_string(trace));
  }
  if (!args.trace_out.empty()) {
    std::ofstream out(args.trace_out);
    if (!out) throw std::runtime_error("cannot write trace file: " + args.trace_out);
    out << "[\n";
    for (std::size_t i = 0; i < traces.size(); ++i) {
      out << traces[i];
      if (i + 1 < traces.size()) out << ",";
      out << "\n";
    }
    out << "]\n";
  }
  return kExitOk;
}

int run_evaluate(const PredictArgs& args) {
  const PredictConfig cfg = make_predict_config(args);
  const std::uint64_t seed = resolve_seed(args.seed, needs_seed(cfg), "sampled or quantum evaluation");
  const LoadedModel loaded = load_model(args.model);
  Dataset test = load_csv(args.data);
  const bool normalize =
      loaded.is_all_pair() ? loaded.all_pair.normalized_features : loaded.one_vs_all.normalized_features;
  if (normalize) test = unit_normalize(test);

  const Evaluation ev = loaded.is_all_pair() ? evaluate(loaded.all_pair, test, cfg, seed)
                                             : evaluate(loaded.one_vs_all, test, cfg, seed);
  std::cout << "accuracy " << std::setprecision(6) << std::fixed << ev.accuracy << "\n";
  std::cout << "confusion (rows true, columns predicted):\n";
  for (Eigen::Index r = 0; r < ev.confusion.rows(); ++r) {
    for (Eigen::Index c = 0; c < ev.confusion.cols(); ++c) {
      std::cout << (c ? "," : "") << ev.confusion(r, c);
    }
    std::cout << "\n";
  }
  print_ledger(ev.ledger);
  if (!args.csv_out.empty()) {
    std::ofstream out(args.csv_out);
    if (!out) throw std::runtime_error("cannot write csv file: " + args.csv_out);
    for (Eigen::Index r = 0; r < ev.confusion.rows(); ++r) {
      for (Eigen::Index c = 0; c < ev.confusion.cols(); ++c) {
        out << (c ? "," : "") << ev.confusion(r, c);
      }
      out << "\n";
    }
  }
  return kExitOk;
}

// ----------------------------------------------------------------- demos ---

struct DemoGroverArgs {
  int k = 16;
  int trials = 500;
  double budget_multiplier = 1.0;
  std::optional<std::uint64_t> seed;
};

int run_demo_grover(const DemoGroverArgs& args) {
  if (args.k < 1 || args.k > 4096) throw UsageError("--k must be in 1..4096");
  if (args.trials < 1) throw UsageError("--trials must be positive");
  const std::uint64_t seed = resolve_seed(args.seed, true, "the grover-max demo");

  std::mt19937_64 score_rng(derive_seed(seed, 1));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int successes = 0;
  ResourceLedger totals;
  for (int trial = 0; trial < args.trials; ++trial) {
    Eigen::VectorXd scores(args.k);
    for (int i = 0; i < args.k; ++i) scores[i] = unit(score_rng);
    const ScoreList sl{scores};
    const DurrHoyerResult res = durr_hoyer_max(
        sl, derive_seed(seed, 100 + static_cast<std::uint64_t>(trial)), args.budget_multiplier);
    totals += res.ledger;
    if (res.index == classical_argmax(sl)) ++successes;
  }
  const double rate = static_cast<double>(successes) / args.trials;
  std::cout << "grover-max: k=" << args.k << " trials=" << args.trials << " budget_multiplier="
            << std::setprecision(2) << std::fixed << args.budget_multiplier << "\n";
  std::cout << "success_rate " << std::setprecision(6) << std::fixed << rate << "\n";
  std::cout << "mean_grover_iterations " << std::setprecision(3) << std::fixed
            << static_cast<double>(totals.grover_iterations) / args.trials << "\n";
  print_ledger(totals);
  return kExitOk;
}

struct DemoModeArgs {
  std::string votes;
  double eps = 0.1;
  double delta = 0.1;
  int trials = 200;
  int precision_qubits = 9;
  std::optional<std::uint64_t> seed;
};

int run_demo_mode(const DemoModeArgs& args) {
  if (args.trials < 1) throw UsageError("--trials must be positive");
  VoteList votes;
  {
    std::stringstream ss(args.votes);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      try {
        votes.votes.push_back(std::stoi(tok));
      } catch (const std::exception&) {
        throw UsageError("--votes must be a comma-separated list of class ids");
      }
    }
  }
  const std::size_t n = votes.votes.size();
  if (n == 0) throw UsageError("--votes is empty");
  int k = 2;
  while (static_cast<std::size_t>(k) * (k - 1) / 2 < n) ++k;
  if (static_cast<std::size_t>(k) * (k - 1) / 2 != n) {
    throw UsageError("vote count " + std::to_string(n) + " is not k(k-1)/2 for any k");
  }
  if (k > 16) throw UsageError("mode finding caps k at 16 so the vote register stays small");
  votes.k = k;
  for (int v : votes.votes) {
    if (v < 1 || v > k) throw UsageError("vote values must lie in 1.." + std::to_string(k));
  }
  const std::uint64_t seed = resolve_seed(args.seed, true, "the mode-find demo");

  std::map<int, int> counts;
  for (int v : votes.votes) counts[v]++;
  int max_count = 0;
  for (const auto& [cls, m] : counts) max_count = std::max(max_count, m);

  ModeConfig mode_cfg;
  mode_cfg.precision_qubits = args.precision_qubits;
  ResourceLedger totals;
  int true_mode_hits = 0;
  std::map<int, int> returned;
  for (int trial = 0; trial < args.trials; ++trial) {
    const int out = quantum_mode(votes, args.eps, args.delta,
                                 derive_seed(seed, static_cast<std::uint64_t>(trial)), &totals, mode_cfg);
    returned[out]++;
    if (counts.count(out) && counts.at(out) == max_count) ++true_mode_hits;
  }
  std::cout << "mode-find: votes=" << args.votes << " k=" << k << " trials=" << args.trials << "\n";
  std::cout << "classical_mode " << classical_mode(votes) << "\n";
  for (const auto& [cls, m] : returned) {
    std::cout << "returned " << cls << " in " << m << " trials\n";
  }
  std::cout << "true_mode_rate " << std::setprecision(6) << std::fixed
            << static_cast<double>(true_mode_hits) / args.trials << "\n";
  print_ledger(totals);
  return kExitOk;
}

struct DemoSwapArgs {
  std::string which = "random";
  int qubits = 3;
  std::uint64_t shots = 4096;
  std::optional<std::uint64_t> seed;
};

int run_demo_swap(const DemoSwapArgs& args) {
  if (args.qubits < 1 || args.qubits > 10) throw UsageError("--qubits must be in 1..10");
  const std::uint64_t seed = resolve_seed(args.seed, true, "the swap-test demo");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;

  const Eigen::Index dim = Eigen::Index{1} << args.qubits;
  CVector a(dim);
  for (Eigen::Index i = 0; i < dim; ++i) a[i] = normal(rng);
  a /= a.norm();
  CVector b;
  if (args.which == "identical") {
    b = a;
  } else if (args.which == "antipodal") {
    b = -a;
  } else if (args.which == "orthogonal") {
    b = CVector(dim);
    for (Eigen::Index i = 0; i < dim; ++i) b[i] = normal(rng);
    b -= a * a.dot(b);
    b /= b.norm();
  } else if (args.which == "random") {
    b = CVector(dim);
    for (Eigen::Index i = 0; i < dim; ++i) b[i] = normal(rng);
    b /= b.norm();
  } else {
    throw UsageError("--case must be identical, antipodal, orthogonal, or random");
  }

  const TrainingState u{QState(args.qubits, a), 1.0, args.qubits - 1, 1, 0, 1, 2};
  const QueryState x{QState(args.qubits, b), 1.0, args.qubits - 1, 1, 0};
  ResourceLedger ledger;
  const PairProbability exact = pair_probability(u, x, ProbabilityMode::exact, 0, 0);
  std::cout << "swap-test (" << args.which << ", " << args.qubits << " qubits)\n";
  std::cout << "overlap_re " << std::setprecision(6) << std::fixed
            << u.state.amplitudes().dot(x.state.amplitudes()).real() << "\n";
  std::cout << "p_exact " << std::setprecision(6) << std::fixed << exact.p << "\n";
  if (args.shots > 0) {
    const PairProbability sampled =
        pair_probability(u, x, ProbabilityMode::sampled, args.shots, derive_seed(seed, 2), &ledger);
    std::cout << "p_sampled " << std::setprecision(6) << std::fixed << sampled.p << " (shots "
              << args.shots << ")\n";
    print_ledger(ledger);
  }
  return kExitOk;
}

struct DemoQpeArgs {
  int m = 2;
  int precision_qubits = 9;
  double eps_kr = 1.0 / 16.0;
  int trotter_steps = 0;
  std::optional<std::uint64_t> seed;
};

int run_demo_qpe(const DemoQpeArgs& args) {
  if (args.m < 2 || args.m > 8) throw UsageError("--m must be in 2..8");
  const std::uint64_t seed = resolve_seed(args.seed, true, "the qpe-solve demo");

  Eigen::MatrixXd kmat;
  Eigen::VectorXd y(args.m);
  if (args.m == 2) {
    kmat = Eigen::MatrixXd::Identity(2, 2);  // exact-eigenphase instance
    y << 1, -1;
  } else {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    for (;;) {
      Eigen::MatrixXd g(args.m, args.m);
      for (int i = 0; i < args.m; ++i) {
        for (int j = 0; j < args.m; ++j) g(i, j) = normal(rng);
      }
      kmat = g * g.transpose() / args.m;
      const FHat probe = build_fhat(GramMatrix{kmat}, 1.0);
      const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(probe.matrix, Eigen::EigenvaluesOnly);
      if (es.eigenvalues().cwiseAbs().minCoeff() >= 1.15 * args.eps_kr &&
          es.eigenvalues().cwiseAbs().maxCoeff() <= 1.0) {
        break;
      }
    }
    for (int i = 0; i < args.m; ++i) y[i] = i % 2 == 0 ? 1.0 : -1.0;
  }

  const FHat fhat = build_fhat(GramMatrix{kmat}, 1.0);
  InversionConfig cfg;
  cfg.precision_qubits = args.precision_qubits;
  cfg.eps_kr = args.eps_kr;
  if (args.trotter_steps > 0) {
    cfg.evolution = EvolutionKind::trotter;
    cfg.trotter_steps = args.trotter_steps;
  }

  ResourceLedger ledger;
  const QuantumSolveResult res = quantum_solve(fhat, y, cfg, &ledger);

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(fhat.matrix, Eigen::EigenvaluesOnly);
  std::cout << "qpe-solve: M=" << args.m << " precision_qubits=" << args.precision_qubits << "\n";
  std::cout << "f_hat_eigenvalues";
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    std::cout << " " << std::setprecision(6) << std::fixed << es.eigenvalues()[i];
  }
  std::cout << "\n";

  Eigen::MatrixXd f = fhat.matrix * fhat.trace_f;
  Eigen::VectorXd rhs(args.m + 1);
  rhs[0] = 0.0;
  rhs.tail(args.m) = y;
  const Eigen::VectorXd sol = f.partialPivLu().solve(rhs);
  CVector reference = CVector::Zero(res.solution.dim());
  for (int i = 0; i <= args.m; ++i) reference[i] = sol[i];
  reference /= reference.norm();

  std::cout << "success_probability " << std::setprecision(6) << std::fixed
            << res.success_probability << "\n";
  std::cout << "postselect_attempts " << res.postselect_attempts << "\n";
  std::cout << "fidelity_vs_classical " << std::setprecision(6) << std::fixed
            << state_fidelity(res.solution.amplitudes(), reference) << "\n";
  print_ledger(ledger);
  return kExitOk;
}

// ----------------------------------------------------------------- bench ---

struct BenchArgs {
  std::string k_list = "4,8,16,32,64";
  int trials = 300;
  double budget_multiplier = 1.0;
  std::string out;
  std::optional<std::uint64_t> seed;
};

int run_bench(const BenchArgs& args) {
  if (args.trials < 1) throw UsageError("--trials must be positive");
  std::vector<int> ks;
  {
    std::stringstream ss(args.k_list);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      int k = 0;
      try {
        k = std::stoi(tok);
      } catch (const std::exception&) {
        throw UsageError("--k-list must be a comma-separated list of integers");
      }
      if (k < 2 || k > 4096) throw UsageError("bench k values must be in 2..4096");
      ks.push_back(k);
    }
  }
  if (ks.empty()) throw UsageError("--k-list is empty");
  const std::uint64_t seed = resolve_seed(args.seed, true, "bench");

  std::ostringstream csv;
  csv << "k,trials,mean_queries,success_rate\n";
  std::vector<double> fit_k, fit_q;
  for (int k : ks) {
    std::mt19937_64 score_rng(derive_seed(seed, static_cast<std::uint64_t>(k)));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int successes = 0;
    double query_sum = 0.0;
    int query_count = 0;
    for (int trial = 0; trial < args.trials; ++trial) {
      Eigen::VectorXd scores(k);
      for (int i = 0; i < k; ++i) scores[i] = unit(score_rng);
      const ScoreList sl{scores};
      const int truth = classical_argmax(sl);
      const DurrHoyerResult res = durr_hoyer_max(
          sl, derive_seed(seed, static_cast<std::uint64_t>(k) * 1000003ULL + trial),
          args.budget_multiplier);
      if (res.index == truth) {
        ++successes;
        // oracle queries consumed up to the adoption of the maximum
        query_sum += static_cast<double>(res.threshold_history.back().second);
        ++query_count;
      }
    }
    const double mean_queries = query_count > 0 ? query_sum / query_count : 0.0;
    const double rate = static_cast<double>(successes) / args.trials;
    csv << k << "," << args.trials << "," << std::setprecision(3) << std::fixed << mean_queries
        << "," << std::setprecision(6) << std::fixed << rate << "\n";
    if (query_count > 0) {
      fit_k.push_back(static_cast<double>(k));
      fit_q.push_back(std::max(mean_queries, 1e-9));
    }
  }

  if (args.out.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream out(args.out);
    if (!out) throw std::runtime_error("cannot write csv file: " + args.out);
    out << csv.str();
    std::cout << "wrote " << args.out << "\n";
  }
  if (fit_k.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(fit_k.size());
    for (std::size_t i = 0; i < fit_k.size(); ++i) {
      const double lx = std::log(fit_k[i]);
      const double ly = std::log(fit_q[i]);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    std::cout << "fitted_query_exponent " << std::setprecision(4) << std::fixed << slope << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qallpair: quantum all-pair multiclass LS-SVM simulator"};
  app.require_subcommand(1);

  TrainArgs train_args;
  CLI::App* train = app.add_subcommand("train", "train an ensemble and write a model file");
  train->add_option("--data", train_args.data, "training CSV")->required();
  train->add_option("--out", train_args.out, "output model JSON")->required();
  train->add_option("--strategy", train_args.strategy, "all-pair | one-vs-all");
  train->add_option("--mode", train_args.mode, "classical | quantum");
  train->add_option("--gamma", train_args.gamma, "regularization gamma");
  train->add_option("--kernel", train_args.kernel, "linear | rbf");
  train->add_option("--sigma", train_args.sigma, "rbf width");
  train->add_flag("--normalize", train_args.normalize, "unit-normalize feature vectors");
  train->add_option("--precision-qubits", train_args.precision_qubits, "QPE register width");
  train->add_option("--eps-kr", train_args.eps_kr, "eigenvalue floor for the inversion filter");
  train->add_option("--t0", train_args.t0, "evolution-time scale");
  train->add_option("--trotter-steps", train_args.trotter_steps,
                    "use trotterized evolution with this many steps (0 = exact)");
  train->add_option("--seed", train_args.seed, "run seed (env QALLPAIR_SEED)");

  PredictArgs predict_args;
  CLI::App* predict = app.add_subcommand("predict", "predict classes for input rows");
  predict->add_option("--model", predict_args.model, "model JSON")->required();
  predict->add_option("--data", predict_args.data, "input CSV (label column optional)")->required();
  predict->add_option("--probability", predict_args.probability, "exact | sampled");
  predict->add_option("--shots", predict_args.shots, "shots per swap test (0 = derive from --eps)");
  predict->add_option("--eps", predict_args.eps, "target accuracy for derived shots");
  predict->add_option("--mode-finder", predict_args.mode_finder, "classical | quantum");
  predict->add_option("--mode-eps", predict_args.mode_eps, "mode-finder frequency margin");
  predict->add_option("--mode-delta", predict_args.mode_delta, "mode-finder failure budget");
  predict->add_option("--count-precision", predict_args.count_precision,
                      "reading qubits for quantum counting");
  predict->add_option("--budget-multiplier", predict_args.budget_multiplier,
                      "max-finding budget scale");
  predict->add_option("--trace", predict_args.trace_out, "write prediction traces to this JSON file");
  predict->add_option("--seed", predict_args.seed, "run seed (env QALLPAIR_SEED)");

  PredictArgs eval_args;
  CLI::App* eval = app.add_subcommand("evaluate", "accuracy and confusion matrix on labeled data");
  eval->add_option("--model", eval_args.model, "model JSON")->required();
  eval->add_option("--data", eval_args.data, "labeled CSV")->required();
  eval->add_option("--probability", eval_args.probability, "exact | sampled");
  eval->add_option("--shots", eval_args.shots, "shots per swap test (0 = derive from --eps)");
  eval->add_option("--eps", eval_args.eps, "target accuracy for derived shots");
  eval->add_option("--mode-finder", eval_args.mode_finder, "classical | quantum");
  eval->add_option("--mode-eps", eval_args.mode_eps, "mode-finder frequency margin");
  eval->add_option("--mode-delta", eval_args.mode_delta, "mode-finder failure budget");
  eval->add_option("--count-precision", eval_args.count_precision,
                   "reading qubits for quantum counting");
  eval->add_option("--budget-multiplier", eval_args.budget_multiplier, "max-finding budget scale");
  eval->add_option("--csv", eval_args.csv_out, "also write the confusion matrix as CSV");
  eval->add_option("--seed", eval_args.seed, "run seed (env QALLPAIR_SEED)");

  CLI::App* demo = app.add_subcommand("demo", "standalone algorithm demonstrations");
  demo->require_subcommand(1);

  DemoGroverArgs grover_args;
  CLI::App* demo_grover = demo->add_subcommand("grover-max", "threshold max-finding statistics");
  demo_grover->add_option("--k", grover_args.k, "score count");
  demo_grover->add_option("--trials", grover_args.trials, "Monte Carlo trials");
  demo_grover->add_option("--budget-multiplier", grover_args.budget_multiplier, "budget scale");
  demo_grover->add_option("--seed", grover_args.seed, "run seed (env QALLPAIR_SEED)");

  DemoModeArgs mode_args;
  CLI::App* demo_mode = demo->add_subcommand("mode-find", "quantum mode-finding statistics");
  demo_mode->add_option("--votes", mode_args.votes, "comma-separated vote list")->required();
  demo_mode->add_option("--eps", mode_args.eps, "frequency margin");
  demo_mode->add_option("--delta", mode_args.delta, "failure budget");
  demo_mode->add_option("--trials", mode_args.trials, "Monte Carlo trials");
  demo_mode->add_option("--precision-qubits", mode_args.precision_qubits, "counting register width");
  demo_mode->add_option("--seed", mode_args.seed, "run seed (env QALLPAIR_SEED)");

  DemoSwapArgs swap_args;
  CLI::App* demo_swap = demo->add_subcommand("swap-test", "overlap measurement demonstration");
  demo_swap->add_option("--case", swap_args.which, "identical | antipodal | orthogonal | random");
  demo_swap->add_option("--qubits", swap_args.qubits, "state register width");
  demo_swap->add_option("--shots", swap_args.shots, "sampled shots (0 = exact only)");
  demo_swap->add_option("--seed", swap_args.seed, "run seed (env QALLPAIR_SEED)");

  DemoQpeArgs qpe_args;
  CLI::App* demo_qpe = demo->add_subcommand("qpe-solve", "matrix-inversion training demonstration");
  demo_qpe->add_option("--m", qpe_args.m, "pair subset size");
  demo_qpe->add_option("--precision-qubits", qpe_args.precision_qubits, "QPE register width");
  demo_qpe->add_option("--eps-kr", qpe_args.eps_kr, "eigenvalue floor");
  demo_qpe->add_option("--trotter-steps", qpe_args.trotter_steps, "trotter steps (0 = exact)");
  demo_qpe->add_option("--seed", qpe_args.seed, "run seed (env QALLPAIR_SEED)");

  BenchArgs bench_args;
  CLI::App* bench = app.add_subcommand("bench", "max-finding query scaling benchmark");
  bench->add_option("--k-list", bench_args.k_list, "comma-separated k values");
  bench->add_option("--trials", bench_args.trials, "trials per k");
  bench->add_option("--budget-multiplier", bench_args.budget_multiplier, "budget scale");
  bench->add_option("--out", bench_args.out, "output CSV path (default stdout)");
  bench->add_option("--seed", bench_args.seed, "run seed (env QALLPAIR_SEED)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (train->parsed()) return run_train(train_args);
    if (predict->parsed()) return run_predict(predict_args);
    if (eval->parsed()) return run_evaluate(eval_args);
    if (demo->parsed()) {
      if (demo_grover->parsed()) return run_demo_grover(grover_args);
      if (demo_mode->parsed()) return run_demo_mode(mode_args);
      if (demo_swap->parsed()) return run_demo_swap(swap_args);
      if (demo_qpe->parsed()) return run_demo_qpe(qpe_args);
    }
    if (bench->parsed()) return run_bench(bench_args);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
