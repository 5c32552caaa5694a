#include "bnlab/graph_space.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <stdexcept>
#include <string>

#include "bnlab/errors.hpp"

namespace bnlab {

namespace {

// Acyclicity over a parent-mask array via Kahn's algorithm on bitmasks.
bool masks_acyclic(int n, const std::vector<std::uint16_t>& pa) {
  std::uint32_t alive = (1u << n) - 1;
  while (alive != 0) {
    bool removed = false;
    for (int i = 0; i < n && !removed; ++i) {
      if ((alive & (1u << i)) && (pa[i] & alive) == 0) {
        alive &= ~(1u << i);
        removed = true;
      }
    }
    if (!removed) return false;
  }
  return true;
}

}  // namespace

std::vector<Dag> enumerate_dags(int n) {
  if (n < 1) throw std::invalid_argument("enumerate_dags: need at least one node");
  if (n > 5) {
    throw CapacityError("enumerate_dags: n = " + std::to_string(n) +
                        " exceeds the exhaustive enumeration limit of 5");
  }
  // Each ordered pair (i, j), i != j, is one candidate edge bit.
  std::vector<std::pair<int, int>> slots;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j) slots.emplace_back(i, j);
    }
  }
  const int m = static_cast<int>(slots.size());
  std::vector<Dag> out;
  std::vector<std::uint16_t> pa(n);
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << m); ++bits) {
    std::fill(pa.begin(), pa.end(), 0);
    for (int b = 0; b < m; ++b) {
      if (bits & (std::uint64_t{1} << b)) {
        pa[slots[b].second] |= std::uint16_t(1u << slots[b].first);
      }
    }
    if (!masks_acyclic(n, pa)) continue;
    std::vector<std::pair<int, int>> edges;
    for (int b = 0; b < m; ++b) {
      if (bits & (std::uint64_t{1} << b)) edges.push_back(slots[b]);
    }
    out.push_back(Dag::from_edges(n, edges));
  }
  std::sort(out.begin(), out.end(), canonical_less);
  return out;
}

std::string equivalence_key(const Dag& g) {
  const int n = g.num_nodes();
  // Undirected adjacency.
  std::vector<std::uint16_t> adj(n, 0);
  for (const auto& [u, v] : g.edges()) {
    adj[u] |= std::uint16_t(1u << v);
    adj[v] |= std::uint16_t(1u << u);
  }
  std::string key = "s:";
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (adj[u] & (1u << v)) {
        key += std::to_string(u) + "-" + std::to_string(v) + ";";
      }
    }
  }
  key += "v:";
  std::vector<std::array<int, 3>> triples;
  for (int c = 0; c < n; ++c) {
    const std::uint16_t pm = g.parent_mask(c);
    for (int a = 0; a < n; ++a) {
      if (!(pm & (1u << a))) continue;
      for (int b = a + 1; b < n; ++b) {
        if (!(pm & (1u << b))) continue;
        if (adj[a] & (1u << b)) continue;  // parents adjacent: not a v-structure
        triples.push_back({a, c, b});
      }
    }
  }
  std::sort(triples.begin(), triples.end());
  for (const auto& t : triples) {
    key += std::to_string(t[0]) + ">" + std::to_string(t[1]) + "<" + std::to_string(t[2]) + ";";
  }
  return key;
}

bool markov_equivalent(const Dag& a, const Dag& b) {
  if (a.num_nodes() != b.num_nodes()) return false;
  return equivalence_key(a) == equivalence_key(b);
}

std::vector<EquivalenceClass> equivalence_classes(const std::vector<Dag>& dags) {
  std::map<std::string, int> key_to_class;
  std::vector<EquivalenceClass> out;
  for (int i = 0; i < static_cast<int>(dags.size()); ++i) {
    const std::string key = equivalence_key(dags[i]);
    auto it = key_to_class.find(key);
    if (it == key_to_class.end()) {
      key_to_class.emplace(key, static_cast<int>(out.size()));
      out.push_back(EquivalenceClass{{i}, i});
    } else {
      out[it->second].members.push_back(i);
    }
  }
  return out;
}

Dag complete_dag(const std::vector<int>& order) {
  const int n = static_cast<int>(order.size());
  std::vector<std::pair<int, int>> edges;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      edges.emplace_back(order[a], order[b]);
    }
  }
  return Dag::from_edges(n, edges);
}

Dag complete_minus_edge(const std::vector<int>& order, int i, int j) {
  const int n = static_cast<int>(order.size());
  std::vector<std::pair<int, int>> edges;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (order[a] == i && order[b] == j) continue;
      edges.emplace_back(order[a], order[b]);
    }
  }
  return Dag::from_edges(n, edges);
}

}  // namespace bnlab
