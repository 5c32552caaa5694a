#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <random>
#include <string>

#include "bnlab/bayes_net.hpp"
#include "bnlab/bn_io.hpp"
#include "bnlab/errors.hpp"
#include "bnlab/rng.hpp"

using namespace bnlab;

namespace {

// A CHECK_THROWS variant that also inspects the diagnostic location.
template <typename Fn>
std::string config_error_message(Fn&& fn) {
  try {
    fn();
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("a well-formed network parses with comments and blank lines") {
  const std::string text = R"(# two nodes
n 2

node 0 parents
cpt 0.25            # a comment after values
node 1 parents 0
cpt 0.125 0.875
)";
  BayesNet net = parse_network_text(text, "inline");
  CHECK(net.dag().num_nodes() == 2);
  CHECK(net.dag().parents(1) == std::vector<int>{0});
  CHECK(net.theta()[0][0] == 0.25);
  CHECK(net.theta()[1][1] == 0.875);
  CHECK(net.strictly_positive());
}

TEST_CASE("boundary tables clear the strictly-positive flag") {
  const std::string text = "n 1\nnode 0 parents\ncpt 1.0\n";
  BayesNet net = parse_network_text(text, "inline");
  CHECK_FALSE(net.strictly_positive());
  CHECK(net.theta()[0][0] == 1.0);
}

TEST_CASE("round trip through text is exact") {
  // Parameters chosen to be awkward in decimal.
  std::mt19937_64 gen = make_stream(99, 0, 0);
  Dag g = Dag::from_edges(3, {{0, 1}, {0, 2}, {1, 2}});
  Parametrization theta = {{uniform01(gen)},
                           {uniform01(gen), uniform01(gen)},
                           {uniform01(gen), uniform01(gen), uniform01(gen), uniform01(gen)}};
  const BayesNet net(g, theta, true);

  BayesNet back = parse_network_text(network_to_text(net), "roundtrip");
  CHECK(back.dag() == net.dag());
  for (int i = 0; i < 3; ++i) {
    REQUIRE(back.theta()[i].size() == net.theta()[i].size());
    for (std::size_t r = 0; r < net.theta()[i].size(); ++r) {
      CHECK(back.theta()[i][r] == net.theta()[i][r]);  // bit-exact
    }
  }
  CHECK(back.strictly_positive() == net.strictly_positive());
}

TEST_CASE("file round trip preserves the network") {
  const std::filesystem::path path =
      std::filesystem::temp_directory_path() / "bnlab_io_roundtrip.bn";
  const BayesNet net(Dag::from_edges(2, {{1, 0}}), {{0.3, 0.7}, {0.25}}, true);
  write_network(net, path.string());
  BayesNet back = parse_network(path.string());
  CHECK(back.dag() == net.dag());
  CHECK(back.theta() == net.theta());
  // First listed parent order survives the round trip.
  CHECK(back.dag().parents(0) == std::vector<int>{1});
  std::filesystem::remove(path);
}

TEST_CASE("diagnostics carry the file name and line number") {
  const std::string bad_header = "m 2\n";
  CHECK(config_error_message([&] { parse_network_text(bad_header, "net.bn"); })
            .rfind("net.bn:1:", 0) == 0);

  const std::string bad_prob = "n 1\nnode 0 parents\ncpt 1.5\n";
  const std::string msg = config_error_message([&] { parse_network_text(bad_prob, "net.bn"); });
  CHECK(msg.rfind("net.bn:3:", 0) == 0);
  CHECK(msg.find("outside [0,1]") != std::string::npos);
}

TEST_CASE("malformed networks are rejected") {
  CHECK_THROWS_AS(parse_network_text("", "x"), ConfigError);
  CHECK_THROWS_AS(parse_network_text("n 0\n", "x"), ConfigError);
  CHECK_THROWS_AS(parse_network_text("n 13\n", "x"), ConfigError);
  // wrong row count for one parent
  CHECK_THROWS_AS(
      parse_network_text("n 2\nnode 0 parents\ncpt 0.5\nnode 1 parents 0\ncpt 0.5\n", "x"),
      ConfigError);
  // node defined twice
  CHECK_THROWS_AS(
      parse_network_text("n 2\nnode 0 parents\ncpt 0.5\nnode 0 parents\ncpt 0.5\n", "x"),
      ConfigError);
  // parent index out of range
  CHECK_THROWS_AS(parse_network_text("n 1\nnode 0 parents 5\ncpt 0.5 0.5\n", "x"), ConfigError);
  // trailing garbage
  CHECK_THROWS_AS(
      parse_network_text("n 1\nnode 0 parents\ncpt 0.5\nnode 1 parents\ncpt 0.5\n", "x"),
      ConfigError);
  // non-numeric probability
  CHECK_THROWS_AS(parse_network_text("n 1\nnode 0 parents\ncpt half\n", "x"), ConfigError);
  // directed cycle across parent lists
  CHECK_THROWS_AS(
      parse_network_text("n 2\nnode 0 parents 1\ncpt 0.2 0.8\nnode 1 parents 0\ncpt 0.3 0.7\n",
                         "x"),
      ConfigError);
  // missing file
  CHECK_THROWS_AS(parse_network("/nonexistent/net.bn"), ConfigError);
}
