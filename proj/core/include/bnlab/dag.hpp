#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace bnlab {

// Joint tables are materialized as vectors of length 2^n, so node counts are
// capped at desk scale.
inline constexpr int kMaxNodes = 12;

// Directed acyclic graph over n boolean variables.
//
// Bit conventions used throughout the library:
//   - a joint state is an integer whose bit i is the value of variable i
//     (variable 0 is the least significant bit);
//   - node subsets are uint16_t bitmasks in the same bit order;
//   - a node's parent list is kept in *listed* order, and the first listed
//     parent is the least significant bit of its CPT row index.
class Dag {
 public:
  Dag() = default;
  explicit Dag(int n);
  static Dag from_edges(int n, const std::vector<std::pair<int, int>>& edges);

  int num_nodes() const { return n_; }
  const std::vector<int>& parents(int i) const;  // listed order
  std::uint16_t parent_mask(int i) const;
  int parent_count(int i) const;
  void add_edge(int from, int to);  // appends `from` to node to's parent list
  bool has_edge(int from, int to) const;
  std::vector<std::pair<int, int>> edges() const;  // sorted (from, to) pairs
  int edge_count() const;

  bool is_acyclic() const;
  std::vector<int> topological_order() const;  // throws std::logic_error if cyclic

  // Number of free parameters: sum over nodes of 2^{#parents}.
  std::uint64_t dimension() const;

  std::string to_string() const;  // e.g. "n=3:0->1,1->2"

  // Structural equality: same nodes and edges. Listed parent order is a CPT
  // layout detail, not part of graph identity.
  friend bool operator==(const Dag& a, const Dag& b) {
    return a.n_ == b.n_ && a.mask_ == b.mask_;
  }

 private:
  int n_ = 0;
  std::vector<std::vector<int>> parents_;
  std::array<std::uint16_t, kMaxNodes> mask_{};
};

// Deterministic total order used wherever graph lists must be reproducible:
// node count first, then lexicographic on the sorted edge list.
bool canonical_less(const Dag& a, const Dag& b);

}  // namespace bnlab
