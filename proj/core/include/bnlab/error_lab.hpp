#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "bnlab/bayes_net.hpp"
#include "bnlab/dag.hpp"
#include "bnlab/graph_space.hpp"
#include "bnlab/scoring.hpp"

namespace bnlab {

// Importance-sampling proposal: the joint mixture (1-lambda)*P + lambda*T,
// where the tilt target T is the uniform distribution, the projection of P
// onto a target graph, or an explicitly supplied network.
struct ProposalSpec {
  enum class Kind { kUniform, kProjection, kExplicitNet };
  Kind kind = Kind::kUniform;
  double lambda = 0.5;
  std::optional<Dag> target;        // projection kind; defaults to the rival graph
  std::optional<BayesNet> network;  // explicit-net kind
  std::string describe() const;
};

// 15 mixing weights evenly spaced over [0.1, 0.9], crossed with the uniform
// and projection tilts: 30 proposals, uniform kind first.
std::vector<ProposalSpec> default_proposal_grid();

// The concrete mixture; throws std::domain_error unless strictly positive.
JointDistribution proposal_distribution(const ProposalSpec& spec, const JointDistribution& p_star,
                                        const Dag& rival);

struct ErrorEstimate {
  double probability = 0.0;  // clipped to [0,1]
  // log10 of the raw estimate; kept finite even when `probability` underflows,
  // -infinity when no error was observed at all.
  double log10_probability = -std::numeric_limits<double>::infinity();
  double std_error = 0.0;
  std::string method;         // "monte-carlo", "importance-sampling", "exact"
  std::uint64_t N = 0;        // samples per dataset
  std::uint64_t blocks = 0;   // dataset replicates (count vectors for "exact")
  int proposals_used = 0;     // importance sampling only
  double ess = 0.0;           // (sum w)^2 / sum w^2 over all weighted blocks
  bool low_ess = false;       // ess < 10 for a sampling method
  std::vector<double> proposal_ess;  // per-proposal ESS (importance sampling)
};

struct ErrorLabOptions {
  int threads = 1;
};

// Event probability that the rival g strictly outscores g_star on an N-sample
// dataset from net_star; ties favor g_star. Datasets are drawn as multinomial
// count vectors (scores depend on data only through the counts).
ErrorEstimate mc_error_prob(const BayesNet& net_star, const Dag& g_star, const Dag& g,
                            std::uint64_t N, std::uint64_t blocks, const PenaltyFunction& psi,
                            std::uint64_t seed, const ErrorLabOptions& opts = {});

// Same event, estimated by importance sampling: per proposal Q, `blocks`
// datasets from Q, each weighted by exp2(sum_states count * log2(P*/Q));
// per-proposal means are averaged with equal weights.
ErrorEstimate is_error_prob(const BayesNet& net_star, const Dag& g_star, const Dag& g,
                            std::uint64_t N, std::uint64_t blocks, const PenaltyFunction& psi,
                            const std::vector<ProposalSpec>& proposals, std::uint64_t seed,
                            const ErrorLabOptions& opts = {});

// Must be safe to call concurrently when running with multiple threads.
using DatasetEvent = std::function<bool(const SampleCounts&)>;

// Importance-sampling estimator for an arbitrary dataset event; the hook used
// to validate the machinery (an always-true event must integrate to 1).
// `projection_rival` supplies the default target of projection proposals.
ErrorEstimate is_event_prob(const BayesNet& net_star, std::uint64_t N, std::uint64_t blocks,
                            const std::vector<ProposalSpec>& proposals,
                            const Dag& projection_rival, const DatasetEvent& event,
                            std::uint64_t seed, const ErrorLabOptions& opts = {});

struct ExactBreakdown {
  double p_error = 0.0;      // rival strictly ahead
  double p_tie = 0.0;        // equal scores
  double p_star_wins = 0.0;  // true graph strictly ahead
};

// Exact event probability: sum of multinomial dataset probabilities over all
// count vectors, feasible while C(N+2^n-1, 2^n-1) <= 1e7 (CapacityError
// beyond). `blocks` in the result reports the number of count vectors.
ErrorEstimate exact_error_prob(const BayesNet& net_star, const Dag& g_star, const Dag& g,
                               std::uint64_t N, const PenaltyFunction& psi,
                               ExactBreakdown* breakdown = nullptr);

// Fraction of datasets on which the best-scoring candidate class is not the
// class of net_star's graph. `candidates` must contain that graph.
ErrorEstimate misidentification_prob(const BayesNet& net_star, const std::vector<Dag>& candidates,
                                     const std::vector<EquivalenceClass>& classes, std::uint64_t N,
                                     std::uint64_t blocks, const PenaltyFunction& psi,
                                     std::uint64_t seed, const ErrorLabOptions& opts = {});

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  int points = 0;
};

// Ordinary least squares of y on x; needs at least two points.
LinearFit fit_linear(const std::vector<double>& x, const std::vector<double>& y);

struct CrossoverRow {
  std::uint64_t N = 0;
  ErrorEstimate under;  // the non-I-map rival
  ErrorEstimate over;   // the over-parameterized I-map rival
};

struct CrossoverOptions {
  std::string method = "importance-sampling";  // or "monte-carlo"
  std::uint64_t blocks = 6000;
  std::vector<ProposalSpec> proposals;  // empty: default_proposal_grid()
  std::uint64_t seed = 0;
  int threads = 1;
};

struct CrossoverResult {
  std::vector<CrossoverRow> rows;
  LinearFit under_semilog;    // log10 error vs N
  LinearFit over_loglog;      // log10 error vs log10 N
  LinearFit over_semilog;     // log10 error vs N, for fit-quality comparison
  LinearFit over_loglog_top;  // restricted to the top decade of the N grid
  std::uint64_t crossover_N = 0;  // first grid N with the under curve below; 0 if none
  int crossings = 0;              // sign changes between the two curves
};

// Error-decay scan for an under-fitting and an over-fitting rival across an
// N grid. Validates the roles: g_under must not be an I-map of net_star's
// distribution, g_over must be a strictly larger-dimensional I-map. Fits use
// only grid points with at least one observed error.
CrossoverResult crossover_scan(const BayesNet& net_star, const Dag& g_under, const Dag& g_over,
                               const std::vector<std::uint64_t>& N_grid,
                               const PenaltyFunction& psi, const CrossoverOptions& opts);

}  // namespace bnlab
