#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "bnlab/dag.hpp"

namespace bnlab {

// theta[i][c] = P(X_i = 1 | parent assignment c), where c encodes the parent
// values with the first listed parent as the least significant bit.
using Parametrization = std::vector<std::vector<double>>;

// Margin used to validate strictly positive networks.
inline constexpr double kStrictEps = 1e-9;

// Exact distribution over the 2^n joint states (variable 0 = bit 0).
class JointDistribution {
 public:
  JointDistribution() = default;
  // Validates: length 2^n, entries >= 0, sum within 1e-12 of 1.
  JointDistribution(int n, std::vector<double> probs);

  int num_vars() const { return n_; }
  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t state) const { return probs_[state]; }
  const std::vector<double>& probs() const { return probs_; }

  bool is_strictly_positive() const;

  // Marginal table over the variables in `mask`, indexed by the packed
  // assignment (lowest set bit of mask = bit 0 of the packed index).
  std::vector<double> marginal(std::uint16_t mask) const;

 private:
  int n_ = 0;
  std::vector<double> probs_;
};

// Dataset reduced to its sufficient statistic: per-state counts.
struct SampleCounts {
  int n = 0;
  std::uint64_t total = 0;             // N
  std::vector<std::uint64_t> counts;   // length 2^n, sums to N

  JointDistribution frequencies() const;  // counts / N
};

class BayesNet {
 public:
  // Validates table shapes against the dag and entries against [0,1]
  // ([kStrictEps, 1-kStrictEps] when strictly_positive is set).
  BayesNet(Dag dag, Parametrization theta, bool strictly_positive = false);

  const Dag& dag() const { return dag_; }
  const Parametrization& theta() const { return theta_; }
  bool strictly_positive() const { return strict_; }

  // Packed CPT row index for node i under joint state `state`.
  int parent_index(int i, std::uint32_t state) const;
  // P(X_i = value-of-bit-i-in-state | parents as in state).
  double node_factor(int i, std::uint32_t state) const;

 private:
  Dag dag_;
  Parametrization theta_;
  bool strict_ = false;
};

// Exact joint table of the network: probs[x] = prod_i node_factor(i, x).
JointDistribution joint_distribution(const BayesNet& net);

// Smallest conditional-table margin: min over all entries of min(t, 1-t).
double gamma(const BayesNet& net);

// N states sampled by drawing nodes in topological order, each conditioned on
// its sampled parents; deterministic given the seed.
SampleCounts ancestral_sample(const BayesNet& net, std::uint64_t N, std::uint64_t seed);

// Counts ~ Multinomial(N, p) drawn as sequential conditional binomials; the
// fast path used when only the sufficient statistic is needed.
SampleCounts multinomial_counts(const JointDistribution& p, std::uint64_t N,
                                std::mt19937_64& gen);

// Conditional distribution of `targets` given that the variables in
// `given_mask` take the values in `given_bits` (full-state bit positions).
// Result is packed over `targets`. Throws std::domain_error when the
// conditioning event has zero probability.
JointDistribution marginal_conditional(const JointDistribution& p, std::uint16_t targets,
                                       std::uint16_t given_mask, std::uint32_t given_bits);

}  // namespace bnlab
