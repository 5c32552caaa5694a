#include <doctest.h>

#include "bnlab/bayes_net.hpp"
#include "bnlab/divergences.hpp"
#include "bnlab/errors.hpp"
#include "bnlab/graph_space.hpp"

using namespace bnlab;

TEST_CASE("DAG and equivalence-class counts for n = 1..5") {
  const std::size_t dag_counts[] = {1, 3, 25, 543, 29281};
  const std::size_t class_counts[] = {1, 2, 11, 185, 8782};
  for (int n = 1; n <= 5; ++n) {
    const std::vector<Dag> dags = enumerate_dags(n);
    CHECK(dags.size() == dag_counts[n - 1]);
    CHECK(equivalence_classes(dags).size() == class_counts[n - 1]);
  }
  CHECK_THROWS_AS(enumerate_dags(6), CapacityError);
}

TEST_CASE("enumeration is canonically ordered and duplicate-free") {
  const std::vector<Dag> dags = enumerate_dags(3);
  CHECK(dags.front().edge_count() == 0);  // empty graph first
  for (std::size_t i = 0; i + 1 < dags.size(); ++i) CHECK(canonical_less(dags[i], dags[i + 1]));
}

TEST_CASE("markov equivalence: skeleton and v-structures") {
  // 0->1->2, 0<-1<-2 and 0<-1->2 are equivalent; the collider 0->1<-2 is not.
  Dag chain = Dag::from_edges(3, {{0, 1}, {1, 2}});
  Dag reversed = Dag::from_edges(3, {{2, 1}, {1, 0}});
  Dag fork = Dag::from_edges(3, {{1, 0}, {1, 2}});
  Dag collider = Dag::from_edges(3, {{0, 1}, {2, 1}});
  CHECK(markov_equivalent(chain, reversed));
  CHECK(markov_equivalent(chain, fork));
  CHECK_FALSE(markov_equivalent(chain, collider));
  // shielded collider: adding 0-2 removes the v-structure
  Dag shielded_a = Dag::from_edges(3, {{0, 1}, {2, 1}, {0, 2}});
  Dag shielded_b = Dag::from_edges(3, {{0, 1}, {1, 2}, {0, 2}});
  CHECK(markov_equivalent(shielded_a, shielded_b));
}

TEST_CASE("classes partition the enumeration and keep the smallest member first") {
  const std::vector<Dag> dags = enumerate_dags(4);
  const std::vector<EquivalenceClass> classes = equivalence_classes(dags);
  std::size_t total = 0;
  for (const EquivalenceClass& cls : classes) {
    total += cls.members.size();
    REQUIRE_FALSE(cls.members.empty());
    CHECK(cls.representative == cls.members.front());
    for (std::size_t k = 1; k < cls.members.size(); ++k) {
      CHECK(cls.members[k - 1] < cls.members[k]);
      CHECK(markov_equivalent(dags[cls.members.front()], dags[cls.members[k]]));
    }
  }
  CHECK(total == dags.size());
}

TEST_CASE("exactly 4 of the 185 classes are I-maps of the diamond distribution") {
  Dag g_star = Dag::from_edges(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}});
  const BayesNet net(g_star, {{0.1}, {0.1, 0.3}, {0.1, 0.3}, {0.1, 0.8, 0.3, 0.2}}, true);
  const JointDistribution p = joint_distribution(net);
  const std::vector<Dag> dags = enumerate_dags(4);
  const std::vector<EquivalenceClass> classes = equivalence_classes(dags);
  int imap_classes = 0;
  for (const EquivalenceClass& cls : classes) {
    if (kl_to_graph(p, dags[cls.representative]) <= 1e-9) ++imap_classes;
  }
  CHECK(imap_classes == 4);
}

TEST_CASE("complete DAGs have full dimension; removing one edge drops it") {
  const std::vector<int> order{2, 0, 1};
  Dag complete = complete_dag(order);
  CHECK(complete.edge_count() == 3);
  CHECK(complete.dimension() == 1 + 2 + 4);
  CHECK(complete.has_edge(2, 0));
  CHECK(complete.has_edge(0, 1));
  Dag minus = complete_minus_edge(order, 2, 1);
  CHECK(minus.edge_count() == 2);
  CHECK_FALSE(minus.has_edge(2, 1));
}
