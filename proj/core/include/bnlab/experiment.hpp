#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bnlab/bayes_net.hpp"
#include "bnlab/error_lab.hpp"
#include "bnlab/scoring.hpp"

namespace bnlab {

inline constexpr char kVersion[] = "0.1.0";

enum class TaskKind { kScore, kError, kBounds, kFigure1 };
enum class CandidateScope { kAllDags, kAllClasses, kExplicit };

using EdgeList = std::vector<std::pair<int, int>>;

struct ExperimentConfig {
  TaskKind task = TaskKind::kError;
  std::string network_path;                // unused when network_inline is set
  std::optional<BayesNet> network_inline;  // presets carry the network directly
  CandidateScope candidates = CandidateScope::kExplicit;
  std::vector<EdgeList> candidate_edges;   // explicit scope: candidate/rival graphs
  std::string penalty = "bic";             // bic | constant:<v> | table:<N:psi,...>
  std::vector<std::uint64_t> sample_sizes;  // strictly increasing
  std::string method = "is";               // mc | is | exact
  std::uint64_t blocks = 6000;
  std::vector<ProposalSpec> proposals;     // empty: default grid
  bool seed_set = false;                   // seed is mandatory, never wall-clock
  std::uint64_t seed = 0;
  std::string out_dir;
  int threads = 1;
  // bounds-task inputs
  double epsilon = 0.0;
  std::uint64_t chain_m = 0;
  double alpha = 0.0;
  std::uint16_t subset = 0;
  std::uint16_t subset2 = 0;
};

// Flat `key = value` config text; '#' comments. Relative paths resolve
// against the config file's directory. Malformed input raises ConfigError
// with "<path>:<line>:". The seed key is mandatory.
ExperimentConfig parse_config_file(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text, const std::string& name,
                                   const std::string& base_dir);

// Penalty from its config spelling; throws ConfigError on a malformed spec.
PenaltyFunction make_penalty(const std::string& spec);

// The bundled crossover experiment: 4-node network, an over-fitting rival
// with one extra edge, the empty graph as under-fitting rival, importance
// sampling with the default proposal grid, 6000 blocks, N from 100 to 10^4.
ExperimentConfig figure1_preset();

struct RunResult {
  std::string scores_csv;
  std::string errors_csv;
  std::string bounds_csv;
  std::string summary_json;
  double wall_seconds = 0.0;  // reported to the caller only, never in files
};

// Executes the configured task and writes scores.csv, errors.csv, bounds.csv
// and summary.json into config.out_dir (sections not produced by the task are
// header-only). Output bytes depend only on the config and seed.
RunResult run_experiment(const ExperimentConfig& config);

}  // namespace bnlab
