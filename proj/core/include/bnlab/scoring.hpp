#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "bnlab/bayes_net.hpp"
#include "bnlab/dag.hpp"
#include "bnlab/graph_space.hpp"

namespace bnlab {

// Per-dimension penalty weight; score(G) = log_likelihood - dimension * psi(N).
class PenaltyFunction {
 public:
  static PenaltyFunction bic();                  // 0.5 * log2(N)
  static PenaltyFunction constant(double value);
  // Exact-lookup table; evaluating at an unlisted N throws ConfigError.
  static PenaltyFunction table(std::map<std::uint64_t, double> values);

  double operator()(std::uint64_t N) const { return fn_(N); }
  const std::string& describe() const { return description_; }

 private:
  PenaltyFunction(std::function<double(std::uint64_t)> fn, std::string description);

  std::function<double(std::uint64_t)> fn_;
  std::string description_;
};

struct ScoreReport {
  int graph_id = -1;
  int dimension = 0;
  double log_likelihood = 0.0;  // maximized, in bits
  double penalty_value = 0.0;   // psi(N)
  double score = 0.0;           // log_likelihood - dimension * penalty_value
};

// Maximum-likelihood tables for g; parent rows with zero support get 0.5.
Parametrization mle_parameters(const Dag& g, const SampleCounts& counts);

// Marginal-count statistics of one dataset, shared across many graphs.
class FamilyStatCache {
 public:
  explicit FamilyStatCache(const SampleCounts& counts);

  // sum over the mask's count table of c * log2(c); N * log2(N) for mask 0.
  double slog(std::uint16_t mask);

  // Maximized log-likelihood of g in bits:
  // sum_i slog(family(i)) - slog(parents(i)).
  double log_likelihood(const Dag& g);

  std::uint64_t total() const { return total_; }

 private:
  int n_ = 0;
  std::uint64_t total_ = 0;
  std::vector<std::uint64_t> counts_;
  std::vector<double> slog_;
  std::vector<char> have_;
};

double log_likelihood(const Dag& g, const SampleCounts& counts);

ScoreReport mdl_score(const Dag& g, const SampleCounts& counts, const PenaltyFunction& psi,
                      int graph_id = -1);

// Score with empirical frequencies replaced by p itself:
// N * (-sum_i H_p(X_i | Pa(i))) - dimension * psi(N).
double ideal_score(const JointDistribution& p, const Dag& g, const PenaltyFunction& psi,
                   std::uint64_t N);

struct StructureRanking {
  std::vector<ScoreReport> reports;  // input order
  std::vector<int> ranking;          // best first: score desc, dimension asc, index asc
  int winner = -1;                   // ranking.front()
};

StructureRanking best_structure(const std::vector<Dag>& dags, const SampleCounts& counts,
                                const PenaltyFunction& psi);

// Class-level ranking; each class is scored through its representative
// (members agree in both likelihood and dimension), and ranking indices are
// class indices.
StructureRanking best_structure(const std::vector<Dag>& dags,
                                const std::vector<EquivalenceClass>& classes,
                                const SampleCounts& counts, const PenaltyFunction& psi);

}  // namespace bnlab
