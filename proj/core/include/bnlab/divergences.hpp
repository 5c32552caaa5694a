#pragma once

#include <cstdint>
#include <vector>

#include "bnlab/bayes_net.hpp"
#include "bnlab/dag.hpp"

namespace bnlab {

// All entropies and divergences are measured in bits.

// H(vars | given) under p. `vars` must be nonempty and disjoint from `given`.
double entropy(const JointDistribution& p, std::uint16_t vars, std::uint16_t given = 0);

// I(X_i ; X_j | cond) under p.
double mutual_information(const JointDistribution& p, int i, int j, std::uint16_t cond = 0);

// D(p || q). Throws std::domain_error when p puts mass outside q's support.
double relative_entropy(const JointDistribution& p, const JointDistribution& q);

// Network over g whose conditionals are copied from p; the closest
// distribution factorizing over g (zero-mass parent configurations get 0.5).
BayesNet m_projection_net(const JointDistribution& p, const Dag& g);
JointDistribution m_projection(const JointDistribution& p, const Dag& g);

// Divergence from p to the set of distributions factorizing over g,
// computed as sum_i H(X_i | Pa(i)) - H(X). Requires strictly positive p.
double kl_to_graph_factorized(const JointDistribution& p, const Dag& g);

// Same quantity, but evaluated along both available routes (the
// conditional-entropy sum and D(p || m_projection)); throws std::logic_error
// if they disagree beyond 1e-9. Requires strictly positive p.
double kl_to_graph(const JointDistribution& p, const Dag& g);

struct IProjectionOptions {
  int restarts = 20;
  int max_iterations = 10000;  // total budget across restarts
  double tolerance = 1e-10;    // on successive objective values
  std::uint64_t seed = 7351;   // for the random restart points
};

struct IProjectionResult {
  double divergence_bits = 0.0;
  Parametrization theta;
  int iterations_used = 0;
  int restarts_used = 0;
  bool converged = false;
};

// min over parametrizations q of g of D(q || p): the reverse projection,
// found by quasi-Newton descent over logit-parametrized tables with random
// restarts. Restart 0 starts from the m-projection of p onto g.
IProjectionResult i_projection(const JointDistribution& p, const Dag& g,
                               const IProjectionOptions& opts = {});

// Convenience wrapper returning only the divergence; throws ConvergenceError
// (carrying the best value found) when no restart converged.
double graph_to_kl(const Dag& g, const JointDistribution& p,
                   const IProjectionOptions& opts = {});

// Objective D(q_t || p) in bits with theta = sigmoid(t); fills *grad (same
// shape as t) with the gradient when non-null. Exposed for verification.
double i_projection_objective(const Dag& g, const JointDistribution& p,
                              const std::vector<std::vector<double>>& t,
                              std::vector<std::vector<double>>* grad);

// min over conditioning sets S of I(X_i ; X_j | S) under the network's joint
// distribution. Exhaustive over subsets, so the network is capped at 6 nodes.
double information_content(const BayesNet& net, int i, int j);

// min over the network's edges of information_content; +infinity if edgeless.
double network_ic(const BayesNet& net);

}  // namespace bnlab
