#include "bnlab/bayes_net.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "bnlab/rng.hpp"

namespace bnlab {

JointDistribution::JointDistribution(int n, std::vector<double> probs)
    : n_(n), probs_(std::move(probs)) {
  if (n < 1 || n > kMaxNodes) {
    throw std::invalid_argument("joint distribution: node count out of range");
  }
  if (probs_.size() != (std::size_t{1} << n)) {
    throw std::invalid_argument("joint distribution: table size != 2^n");
  }
  double sum = 0.0;
  for (double v : probs_) {
    if (!(v >= 0.0)) {
      throw std::invalid_argument("joint distribution: negative or NaN entry");
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw std::invalid_argument("joint distribution: entries sum to " + std::to_string(sum));
  }
}

bool JointDistribution::is_strictly_positive() const {
  for (double v : probs_) {
    if (v < kStrictEps) return false;
  }
  return true;
}

std::vector<double> JointDistribution::marginal(std::uint16_t mask) const {
  // Map each full state to the packed index over the masked variables.
  const int bits = std::popcount(mask);
  std::vector<double> out(std::size_t{1} << bits, 0.0);
  for (std::size_t x = 0; x < probs_.size(); ++x) {
    std::uint32_t packed = 0;
    int pos = 0;
    for (int i = 0; i < n_; ++i) {
      if (mask & (1u << i)) {
        packed |= ((x >> i) & 1u) << pos;
        ++pos;
      }
    }
    out[packed] += probs_[x];
  }
  return out;
}

JointDistribution SampleCounts::frequencies() const {
  if (total == 0) throw std::invalid_argument("sample counts: empty dataset");
  std::vector<double> f(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    f[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
  }
  return JointDistribution(n, std::move(f));
}

BayesNet::BayesNet(Dag dag, Parametrization theta, bool strictly_positive)
    : dag_(std::move(dag)), theta_(std::move(theta)), strict_(strictly_positive) {
  const int n = dag_.num_nodes();
  if (theta_.size() != static_cast<std::size_t>(n)) {
    throw std::invalid_argument("bayes net: one conditional table per node required");
  }
  for (int i = 0; i < n; ++i) {
    const std::size_t rows = std::size_t{1} << dag_.parent_count(i);
    if (theta_[i].size() != rows) {
      throw std::invalid_argument("bayes net: node " + std::to_string(i) + " table has " +
                                  std::to_string(theta_[i].size()) + " rows, expected " +
                                  std::to_string(rows));
    }
    for (double t : theta_[i]) {
      if (!(t >= 0.0 && t <= 1.0)) {
        throw std::invalid_argument("bayes net: node " + std::to_string(i) +
                                    " has an entry outside [0,1]");
      }
      if (strict_ && (t < kStrictEps || t > 1.0 - kStrictEps)) {
        throw std::invalid_argument("bayes net: node " + std::to_string(i) +
                                    " violates strict positivity");
      }
    }
  }
}

int BayesNet::parent_index(int i, std::uint32_t state) const {
  int idx = 0;
  int pos = 0;
  for (int p : dag_.parents(i)) {
    idx |= ((state >> p) & 1u) << pos;
    ++pos;
  }
  return idx;
}

double BayesNet::node_factor(int i, std::uint32_t state) const {
  const double t = theta_[i][parent_index(i, state)];
  return ((state >> i) & 1u) ? t : 1.0 - t;
}

JointDistribution joint_distribution(const BayesNet& net) {
  const int n = net.dag().num_nodes();
  std::vector<double> probs(std::size_t{1} << n);
  for (std::uint32_t x = 0; x < probs.size(); ++x) {
    double p = 1.0;
    for (int i = 0; i < n; ++i) p *= net.node_factor(i, x);
    probs[x] = p;
  }
  return JointDistribution(n, std::move(probs));
}

double gamma(const BayesNet& net) {
  double g = 1.0;
  for (const auto& table : net.theta()) {
    for (double t : table) {
      g = std::min(g, std::min(t, 1.0 - t));
    }
  }
  return g;
}

SampleCounts ancestral_sample(const BayesNet& net, std::uint64_t N, std::uint64_t seed) {
  const int n = net.dag().num_nodes();
  const std::vector<int> order = net.dag().topological_order();
  SampleCounts out;
  out.n = n;
  out.total = N;
  out.counts.assign(std::size_t{1} << n, 0);
  auto gen = make_stream(seed, 0, 0);
  for (std::uint64_t s = 0; s < N; ++s) {
    std::uint32_t x = 0;
    for (int i : order) {
      const double t = net.theta()[i][net.parent_index(i, x)];
      if (uniform01(gen) < t) x |= 1u << i;
    }
    ++out.counts[x];
  }
  return out;
}

SampleCounts multinomial_counts(const JointDistribution& p, std::uint64_t N,
                                std::mt19937_64& gen) {
  SampleCounts out;
  out.n = p.num_vars();
  out.total = N;
  out.counts.assign(p.size(), 0);
  std::uint64_t remaining = N;
  double mass = 1.0;
  for (std::size_t s = 0; s + 1 < p.size() && remaining > 0; ++s) {
    // Conditioned on what is left, cell s is Binomial(remaining, p_s / mass).
    const double q = std::min(1.0, std::max(0.0, p[s] / mass));
    std::binomial_distribution<std::uint64_t> bin(remaining, q);
    const std::uint64_t c = bin(gen);
    out.counts[s] = c;
    remaining -= c;
    mass -= p[s];
    if (mass <= 0.0) break;
  }
  out.counts[p.size() - 1] += remaining;
  return out;
}

JointDistribution marginal_conditional(const JointDistribution& p, std::uint16_t targets,
                                       std::uint16_t given_mask, std::uint32_t given_bits) {
  if (targets == 0) throw std::invalid_argument("marginal_conditional: empty target set");
  if (targets & given_mask) {
    throw std::invalid_argument("marginal_conditional: target overlaps conditioning set");
  }
  const int n = p.num_vars();
  const int bits = std::popcount(targets);
  std::vector<double> out(std::size_t{1} << bits, 0.0);
  double z = 0.0;
  for (std::uint32_t x = 0; x < p.size(); ++x) {
    if ((x & given_mask) != (given_bits & given_mask)) continue;
    std::uint32_t packed = 0;
    int pos = 0;
    for (int i = 0; i < n; ++i) {
      if (targets & (1u << i)) {
        packed |= ((x >> i) & 1u) << pos;
        ++pos;
      }
    }
    out[packed] += p[x];
    z += p[x];
  }
  if (z <= 0.0) {
    throw std::domain_error("marginal_conditional: conditioning event has zero probability");
  }
  for (double& v : out) v /= z;
  return JointDistribution(bits, std::move(out));
}

}  // namespace bnlab
