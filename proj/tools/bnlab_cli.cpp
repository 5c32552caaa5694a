// Command-line front end: enumeration, scoring, error estimation, bound
// evaluation and the bundled four-node crossover experiment.
#include <cstdint>
#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "bnlab/bayes_net.hpp"
#include "bnlab/bn_io.hpp"
#include "bnlab/divergences.hpp"
#include "bnlab/errors.hpp"
#include "bnlab/experiment.hpp"
#include "bnlab/graph_space.hpp"

namespace {

struct CommonFlags {
  std::string config;
  std::uint64_t seed = 0;
  std::string out;
  int threads = 0;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* out_opt = nullptr;
  CLI::Option* threads_opt = nullptr;
};

void add_common_flags(CLI::App* cmd, CommonFlags* flags, bool config_required) {
  CLI::Option* config = cmd->add_option("--config", flags->config,
                                        "experiment config file ('key = value' lines)");
  if (config_required) config->required();
  flags->seed_opt = cmd->add_option("--seed", flags->seed, "override the config seed");
  flags->out_opt = cmd->add_option("--out", flags->out, "override the output directory");
  flags->threads_opt =
      cmd->add_option("--threads", flags->threads, "override the worker thread count")
          ->check(CLI::Range(1, 64));
}

int run_configured(const CommonFlags& flags, bnlab::TaskKind expected) {
  bnlab::ExperimentConfig cfg = flags.config.empty() ? bnlab::figure1_preset()
                                                     : bnlab::parse_config_file(flags.config);
  if (cfg.task != expected) {
    throw bnlab::ConfigError(flags.config + ": config task does not match the subcommand");
  }
  if (flags.seed_opt->count() > 0) {
    cfg.seed = flags.seed;
    cfg.seed_set = true;
  }
  if (flags.out_opt->count() > 0) cfg.out_dir = flags.out;
  if (flags.threads_opt->count() > 0) cfg.threads = flags.threads;

  const bnlab::RunResult result = bnlab::run_experiment(cfg);
  std::printf("scores:  %s\n", result.scores_csv.c_str());
  std::printf("errors:  %s\n", result.errors_csv.c_str());
  std::printf("bounds:  %s\n", result.bounds_csv.c_str());
  std::printf("summary: %s\n", result.summary_json.c_str());
  std::printf("wall_seconds: %.3f\n", result.wall_seconds);
  return 0;
}

int run_enumerate(int n) {
  const std::vector<bnlab::Dag> dags = bnlab::enumerate_dags(n);
  const std::size_t classes = bnlab::equivalence_classes(dags).size();
  std::printf("dags=%zu classes=%zu\n", dags.size(), classes);
  return 0;
}

int run_info(const std::string& network_path) {
  std::printf("bnlab %s\n", bnlab::kVersion);
  if (network_path.empty()) return 0;
  const bnlab::BayesNet net = bnlab::parse_network(network_path);
  const bnlab::Dag& g = net.dag();
  std::string edges;
  for (const auto& [from, to] : g.edges()) {
    if (!edges.empty()) edges += ",";
    edges += std::to_string(from) + "-" + std::to_string(to);
  }
  std::printf("network: %s\n", network_path.c_str());
  std::printf("n: %d\n", g.num_nodes());
  std::printf("edges: %s\n", edges.empty() ? "none" : edges.c_str());
  std::printf("dimension: %llu\n", static_cast<unsigned long long>(g.dimension()));
  std::printf("gamma: %.17g\n", bnlab::gamma(net));
  std::printf("strictly_positive: %s\n",
              bnlab::joint_distribution(net).is_strictly_positive() ? "true" : "false");
  if (g.num_nodes() <= 6 && g.edge_count() > 0) {
    std::printf("information_content: %.17g\n", bnlab::network_ic(net));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"model-selection error rates for small boolean Bayesian networks"};
  app.require_subcommand(1);

  CLI::App* enumerate = app.add_subcommand(
      "enumerate", "count DAGs and Markov equivalence classes on n labelled nodes");
  int enum_n = 0;
  enumerate->add_option("--n", enum_n, "node count")->required()->check(CLI::Range(1, 5));

  CommonFlags score_flags, error_flags, bounds_flags, figure1_flags;
  add_common_flags(app.add_subcommand("score", "score candidate structures on one dataset"),
                   &score_flags, true);
  add_common_flags(app.add_subcommand("error", "estimate model-selection error probabilities"),
                   &error_flags, true);
  add_common_flags(app.add_subcommand("bounds", "evaluate the closed-form bound battery"),
                   &bounds_flags, true);
  add_common_flags(
      app.add_subcommand("figure1",
                         "run the bundled four-node under/over-fitting crossover experiment"),
      &figure1_flags, false);

  CLI::App* info = app.add_subcommand("info", "print the version and optional network facts");
  std::string info_network;
  info->add_option("--network", info_network, "network file to describe");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (enumerate->parsed()) return run_enumerate(enum_n);
    if (info->parsed()) return run_info(info_network);
    if (app.get_subcommand("score")->parsed()) {
      return run_configured(score_flags, bnlab::TaskKind::kScore);
    }
    if (app.get_subcommand("error")->parsed()) {
      return run_configured(error_flags, bnlab::TaskKind::kError);
    }
    if (app.get_subcommand("bounds")->parsed()) {
      return run_configured(bounds_flags, bnlab::TaskKind::kBounds);
    }
    return run_configured(figure1_flags, bnlab::TaskKind::kFigure1);
  } catch (const bnlab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const bnlab::CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
