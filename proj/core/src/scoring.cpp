#include "bnlab/scoring.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "bnlab/divergences.hpp"
#include "bnlab/errors.hpp"

namespace bnlab {

PenaltyFunction::PenaltyFunction(std::function<double(std::uint64_t)> fn, std::string description)
    : fn_(std::move(fn)), description_(std::move(description)) {}

PenaltyFunction PenaltyFunction::bic() {
  return PenaltyFunction(
      [](std::uint64_t N) {
        if (N == 0) throw std::invalid_argument("penalty: N must be positive");
        return 0.5 * std::log2(static_cast<double>(N));
      },
      "bic");
}

PenaltyFunction PenaltyFunction::constant(double value) {
  if (!(value >= 0.0)) throw std::invalid_argument("penalty: constant must be nonnegative");
  return PenaltyFunction([value](std::uint64_t) { return value; },
                         "constant:" + std::to_string(value));
}

PenaltyFunction PenaltyFunction::table(std::map<std::uint64_t, double> values) {
  if (values.empty()) throw std::invalid_argument("penalty: empty table");
  return PenaltyFunction(
      [values = std::move(values)](std::uint64_t N) {
        auto it = values.find(N);
        if (it == values.end()) {
          throw ConfigError("penalty table has no entry for N=" + std::to_string(N));
        }
        return it->second;
      },
      "table");
}

Parametrization mle_parameters(const Dag& g, const SampleCounts& counts) {
  const int n = g.num_nodes();
  if (counts.n != n) throw std::invalid_argument("mle_parameters: dimension mismatch");
  Parametrization theta(n);
  for (int i = 0; i < n; ++i) {
    const std::size_t rows = std::size_t{1} << g.parent_count(i);
    std::vector<std::uint64_t> pa_count(rows, 0);
    std::vector<std::uint64_t> one_count(rows, 0);
    for (std::uint32_t x = 0; x < counts.counts.size(); ++x) {
      int row = 0;
      int pos = 0;
      for (int p : g.parents(i)) {
        row |= ((x >> p) & 1u) << pos;
        ++pos;
      }
      pa_count[row] += counts.counts[x];
      if ((x >> i) & 1u) one_count[row] += counts.counts[x];
    }
    theta[i].resize(rows);
    for (std::size_t c = 0; c < rows; ++c) {
      theta[i][c] = pa_count[c] > 0
                        ? static_cast<double>(one_count[c]) / static_cast<double>(pa_count[c])
                        : 0.5;
    }
  }
  return theta;
}

FamilyStatCache::FamilyStatCache(const SampleCounts& counts)
    : n_(counts.n), total_(counts.total), counts_(counts.counts) {
  if (total_ == 0) throw std::invalid_argument("scoring: empty dataset");
  slog_.assign(std::size_t{1} << n_, 0.0);
  have_.assign(std::size_t{1} << n_, 0);
}

double FamilyStatCache::slog(std::uint16_t mask) {
  if (have_[mask]) return slog_[mask];
  double v = 0.0;
  if (mask == 0) {
    v = static_cast<double>(total_) * std::log2(static_cast<double>(total_));
  } else {
    std::vector<std::uint64_t> cell(std::size_t{1} << std::popcount(mask), 0);
    for (std::uint32_t x = 0; x < counts_.size(); ++x) {
      std::uint32_t packed = 0;
      int pos = 0;
      for (int i = 0; i < n_; ++i) {
        if (mask & (1u << i)) {
          packed |= ((x >> i) & 1u) << pos;
          ++pos;
        }
      }
      cell[packed] += counts_[x];
    }
    for (std::uint64_t c : cell) {
      if (c > 0) v += static_cast<double>(c) * std::log2(static_cast<double>(c));
    }
  }
  slog_[mask] = v;
  have_[mask] = 1;
  return v;
}

double FamilyStatCache::log_likelihood(const Dag& g) {
  if (g.num_nodes() != n_) throw std::invalid_argument("scoring: dimension mismatch");
  double ll = 0.0;
  for (int i = 0; i < n_; ++i) {
    const std::uint16_t pa = g.parent_mask(i);
    const std::uint16_t fam = std::uint16_t(pa | (1u << i));
    ll += slog(fam) - slog(pa);
  }
  return ll;
}

double log_likelihood(const Dag& g, const SampleCounts& counts) {
  FamilyStatCache cache(counts);
  return cache.log_likelihood(g);
}

ScoreReport mdl_score(const Dag& g, const SampleCounts& counts, const PenaltyFunction& psi,
                      int graph_id) {
  FamilyStatCache cache(counts);
  ScoreReport r;
  r.graph_id = graph_id;
  r.dimension = g.dimension();
  r.log_likelihood = cache.log_likelihood(g);
  r.penalty_value = psi(counts.total);
  r.score = r.log_likelihood - r.dimension * r.penalty_value;
  return r;
}

double ideal_score(const JointDistribution& p, const Dag& g, const PenaltyFunction& psi,
                   std::uint64_t N) {
  if (p.num_vars() != g.num_nodes()) throw std::invalid_argument("ideal_score: dimension mismatch");
  double cond_sum = 0.0;
  for (int i = 0; i < g.num_nodes(); ++i) {
    cond_sum += entropy(p, std::uint16_t(1u << i), g.parent_mask(i));
  }
  return -static_cast<double>(N) * cond_sum - g.dimension() * psi(N);
}

namespace {

// Best first: higher score, then lower dimension, then lower index.
std::vector<int> rank_reports(const std::vector<ScoreReport>& reports) {
  std::vector<int> order(reports.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (reports[a].score != reports[b].score) return reports[a].score > reports[b].score;
    if (reports[a].dimension != reports[b].dimension) {
      return reports[a].dimension < reports[b].dimension;
    }
    return a < b;
  });
  return order;
}

}  // namespace

StructureRanking best_structure(const std::vector<Dag>& dags, const SampleCounts& counts,
                                const PenaltyFunction& psi) {
  if (dags.empty()) throw std::invalid_argument("best_structure: no candidates");
  FamilyStatCache cache(counts);
  const double pen = psi(counts.total);
  StructureRanking out;
  out.reports.reserve(dags.size());
  for (int i = 0; i < static_cast<int>(dags.size()); ++i) {
    ScoreReport r;
    r.graph_id = i;
    r.dimension = dags[i].dimension();
    r.log_likelihood = cache.log_likelihood(dags[i]);
    r.penalty_value = pen;
    r.score = r.log_likelihood - r.dimension * pen;
    out.reports.push_back(r);
  }
  out.ranking = rank_reports(out.reports);
  out.winner = out.ranking.front();
  return out;
}

StructureRanking best_structure(const std::vector<Dag>& dags,
                                const std::vector<EquivalenceClass>& classes,
                                const SampleCounts& counts, const PenaltyFunction& psi) {
  if (classes.empty()) throw std::invalid_argument("best_structure: no candidate classes");
  FamilyStatCache cache(counts);
  const double pen = psi(counts.total);
  StructureRanking out;
  out.reports.reserve(classes.size());
  for (const EquivalenceClass& cls : classes) {
    const Dag& rep = dags.at(cls.representative);
    ScoreReport r;
    r.graph_id = cls.representative;
    r.dimension = rep.dimension();
    r.log_likelihood = cache.log_likelihood(rep);
    r.penalty_value = pen;
    r.score = r.log_likelihood - r.dimension * pen;
    out.reports.push_back(r);
  }
  out.ranking = rank_reports(out.reports);
  out.winner = out.ranking.front();
  return out;
}

}  // namespace bnlab
