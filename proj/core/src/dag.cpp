#include "bnlab/dag.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace bnlab {

Dag::Dag(int n) : n_(n), parents_(static_cast<std::size_t>(n > 0 ? n : 0)) {
  if (n < 1 || n > kMaxNodes)
    throw std::invalid_argument("Dag: node count must be in [1, " +
                                std::to_string(kMaxNodes) + "], got " +
                                std::to_string(n));
}

Dag Dag::from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
  Dag g(n);
  for (const auto& [from, to] : edges) g.add_edge(from, to);
  if (!g.is_acyclic()) throw std::invalid_argument("Dag::from_edges: graph has a cycle");
  return g;
}

const std::vector<int>& Dag::parents(int i) const {
  return parents_.at(static_cast<std::size_t>(i));
}

std::uint16_t Dag::parent_mask(int i) const {
  if (i < 0 || i >= n_) throw std::out_of_range("Dag::parent_mask: bad node index");
  return mask_[static_cast<std::size_t>(i)];
}

int Dag::parent_count(int i) const {
  return static_cast<int>(parents(i).size());
}

void Dag::add_edge(int from, int to) {
  if (from < 0 || from >= n_ || to < 0 || to >= n_)
    throw std::invalid_argument("Dag::add_edge: node index out of range");
  if (from == to) throw std::invalid_argument("Dag::add_edge: self loop");
  if (has_edge(from, to)) throw std::invalid_argument("Dag::add_edge: duplicate edge");
  parents_[static_cast<std::size_t>(to)].push_back(from);
  mask_[static_cast<std::size_t>(to)] |= static_cast<std::uint16_t>(1u << from);
}

bool Dag::has_edge(int from, int to) const {
  if (from < 0 || from >= n_ || to < 0 || to >= n_) return false;
  return (mask_[static_cast<std::size_t>(to)] >> from) & 1u;
}

std::vector<std::pair<int, int>> Dag::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int to = 0; to < n_; ++to)
    for (int from : parents_[static_cast<std::size_t>(to)]) out.emplace_back(from, to);
  std::sort(out.begin(), out.end());
  return out;
}

int Dag::edge_count() const {
  int c = 0;
  for (int i = 0; i < n_; ++i) c += parent_count(i);
  return c;
}

bool Dag::is_acyclic() const {
  // Kahn's algorithm on parent bitmasks.
  std::uint16_t alive = static_cast<std::uint16_t>((1u << n_) - 1u);
  for (int removed = 0; removed < n_; ++removed) {
    int pick = -1;
    for (int i = 0; i < n_; ++i) {
      if (!((alive >> i) & 1u)) continue;
      if ((mask_[static_cast<std::size_t>(i)] & alive) == 0) {
        pick = i;
        break;
      }
    }
    if (pick < 0) return false;
    alive = static_cast<std::uint16_t>(alive & ~(1u << pick));
  }
  return true;
}

std::vector<int> Dag::topological_order() const {
  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(n_));
  std::uint16_t placed = 0;
  for (int step = 0; step < n_; ++step) {
    int pick = -1;
    for (int i = 0; i < n_; ++i) {
      if ((placed >> i) & 1u) continue;
      if ((mask_[static_cast<std::size_t>(i)] & ~placed) == 0) {
        pick = i;
        break;
      }
    }
    if (pick < 0) throw std::logic_error("Dag::topological_order: graph has a cycle");
    order.push_back(pick);
    placed = static_cast<std::uint16_t>(placed | (1u << pick));
  }
  return order;
}

std::uint64_t Dag::dimension() const {
  std::uint64_t dim = 0;
  for (int i = 0; i < n_; ++i) dim += std::uint64_t{1} << parent_count(i);
  return dim;
}

std::string Dag::to_string() const {
  std::string s = "n=" + std::to_string(n_) + ":";
  bool first = true;
  for (const auto& [from, to] : edges()) {
    if (!first) s += ",";
    s += std::to_string(from) + "->" + std::to_string(to);
    first = false;
  }
  return s;
}

bool canonical_less(const Dag& a, const Dag& b) {
  if (a.num_nodes() != b.num_nodes()) return a.num_nodes() < b.num_nodes();
  return a.edges() < b.edges();
}

}  // namespace bnlab
