#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bnlab/dag.hpp"

namespace bnlab {

// All DAGs on n labeled nodes, sorted by canonical_less (lexicographic on the
// sorted edge list). Index in this vector is the graph id used in output
// files. Throws CapacityError for n > 5.
std::vector<Dag> enumerate_dags(int n);

// Canonical key: skeleton edges plus normalized v-structure triples
// (a, child, b) with a < b and a, b nonadjacent. Two DAGs share a key iff
// they represent the same set of distributions.
std::string equivalence_key(const Dag& g);

bool markov_equivalent(const Dag& a, const Dag& b);

struct EquivalenceClass {
  std::vector<int> members;  // indices into the enumerated DAG list, ascending
  int representative = -1;   // first member
};

// Groups `dags` by equivalence_key; classes ordered by their first member.
std::vector<EquivalenceClass> equivalence_classes(const std::vector<Dag>& dags);

// Complete DAG oriented along `order` (earlier nodes point at later ones).
Dag complete_dag(const std::vector<int>& order);

// Complete DAG along `order` with the single edge i->j removed.
Dag complete_minus_edge(const std::vector<int>& order, int i, int j);

}  // namespace bnlab
