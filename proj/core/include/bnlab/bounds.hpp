#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bnlab/bayes_net.hpp"
#include "bnlab/dag.hpp"
#include "bnlab/scoring.hpp"

namespace bnlab {

struct BoundReport {
  std::string bound_id;
  std::string inputs_json;  // inputs echoed as a JSON object
  double value = 0.0;       // probability-unit values clipped to [0,1]
  double raw_value = 0.0;   // the unclipped expression value
  std::string unit;         // probability | exponent-per-sample | threshold-N | divergence-bits
  std::string note;         // conventions that affect the number
};

// Bound on D(P || Q) in bits when the two distributions differ by at most
// epsilon per entry and Q's entries are at least gamma: 8*eps^2/gamma^2.
// Requires 0 < epsilon < gamma/2.
BoundReport kl_pointwise_bound(double gamma, double epsilon);

// Bound on a divergence assembled from m-value conditionals whose entries are
// at least gamma, each perturbed by at most epsilon: (64*m*ln2/gamma^2)*eps.
// Requires 0 < epsilon < gamma^2/(32*ln2).
BoundReport kl_chain_bound(double gamma, double epsilon, std::uint64_t m);

// Asymptotic lower bound on (1/N)*log2 of the probability that g outscores
// the true graph, for a rival g that cannot represent the true distribution:
// -graph_to_kl(g, P*). Throws std::domain_error when g is an I-map (the
// exponent is undefined there; the over-fit asymptote regime applies).
BoundReport sanov_lower_exponent(const BayesNet& net_star, const Dag& g);

// Asymptotic upper bound on the under-fitting error exponent, in bits per
// sample: max(-gamma^(2n)/6, -IC^2/(48*[n*log2(gamma/2)+1]^2*4^n)) with the
// bracket taken as a magnitude. Needs a strictly positive net with n <= 6.
BoundReport underfit_upper_exponent(const BayesNet& net_star);

// Smallest N0 such that psi(N)/N <= IC/(dim(G*)-n) for every N >= N0, found
// by scanning N while the ratio still fails. Requires dim(G*) > n.
BoundReport ideal_recovery_threshold(const BayesNet& net_star, const PenaltyFunction& psi);

// Concentration bounds for empirical quantities at deviation level alpha and
// sample size N, all requiring 0 < alpha < gamma^n:
//   marginal-deviation:              2*exp(-alpha^2*N/(3*Pmax(S)))
//   plogp-deviation:                 same right-hand side, for p*log2(p) terms
//   entropy-deviation:               2^(n+1)*exp(-alpha^2*N/3)
//   conditional-entropy-deviation:   2^(n+2)*exp(-alpha^2*N/3)   (S given T)
//   loglik-gap-deviation:            n*2^(n+3)*exp(-alpha^2*N/3)
// subset/subset2 are variable masks; subset2 is the conditioning set and must
// be disjoint from subset. The deviation thresholds the bounds refer to are
// recorded in each report's note.
std::vector<BoundReport> deviation_bounds(const BayesNet& net_star, double alpha,
                                          std::uint64_t N, std::uint16_t subset,
                                          std::uint16_t subset2);

// Asymptotic over-fitting error probability for a rival exceeding the true
// dimension by dim_gap: (1/Gamma(dim_gap/2))*(log2 N)^(dim_gap/2-1)*N^(-dim_gap/2).
// Requires dim_gap >= 1 and N >= 2.
BoundReport overfit_asymptote(int dim_gap, std::uint64_t N);

}  // namespace bnlab
