#include "bnlab/bn_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "bnlab/errors.hpp"

namespace bnlab {

namespace {

struct Cursor {
  const std::string& name;
  int line = 0;
  [[noreturn]] void fail(const std::string& message) const {
    throw ConfigError(name + ":" + std::to_string(line) + ": " + message);
  }
};

std::vector<std::string> tokenize(const std::string& raw) {
  const std::size_t hash = raw.find('#');
  std::istringstream in(hash == std::string::npos ? raw : raw.substr(0, hash));
  std::vector<std::string> tokens;
  std::string tok;
  while (in >> tok) tokens.push_back(tok);
  return tokens;
}

int parse_int(const std::string& tok, const Cursor& cur, const char* what) {
  std::size_t used = 0;
  int value = 0;
  try {
    value = std::stoi(tok, &used);
  } catch (const std::exception&) {
    cur.fail(std::string("expected an integer ") + what + ", got '" + tok + "'");
  }
  if (used != tok.size()) {
    cur.fail(std::string("trailing characters in ") + what + " '" + tok + "'");
  }
  return value;
}

double parse_prob(const std::string& tok, const Cursor& cur) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(tok, &used);
  } catch (const std::exception&) {
    cur.fail("expected a probability, got '" + tok + "'");
  }
  if (used != tok.size()) cur.fail("trailing characters in probability '" + tok + "'");
  if (!(value >= 0.0 && value <= 1.0)) cur.fail("probability " + tok + " outside [0,1]");
  return value;
}

}  // namespace

BayesNet parse_network_text(const std::string& text, const std::string& name) {
  std::istringstream in(text);
  Cursor cur{name};
  std::string raw;

  auto next_tokens = [&]() -> std::vector<std::string> {
    while (std::getline(in, raw)) {
      ++cur.line;
      auto tokens = tokenize(raw);
      if (!tokens.empty()) return tokens;
    }
    return {};
  };

  auto header = next_tokens();
  if (header.empty()) cur.fail("empty network file");
  if (header.size() != 2 || header[0] != "n") cur.fail("expected header 'n <count>'");
  const int n = parse_int(header[1], cur, "node count");
  if (n < 1 || n > kMaxNodes) {
    cur.fail("node count " + std::to_string(n) + " outside [1, " + std::to_string(kMaxNodes) +
             "]");
  }

  Dag dag(n);
  Parametrization theta(n);
  std::vector<char> seen(n, 0);
  for (int k = 0; k < n; ++k) {
    auto node_line = next_tokens();
    if (node_line.empty()) cur.fail("expected 'node <i> parents <j...>'");
    if (node_line.size() < 3 || node_line[0] != "node" || node_line[2] != "parents") {
      cur.fail("expected 'node <i> parents <j...>'");
    }
    const int i = parse_int(node_line[1], cur, "node index");
    if (i < 0 || i >= n) cur.fail("node index " + std::to_string(i) + " outside [0, n)");
    if (seen[i]) cur.fail("node " + std::to_string(i) + " defined twice");
    seen[i] = 1;
    for (std::size_t t = 3; t < node_line.size(); ++t) {
      const int p = parse_int(node_line[t], cur, "parent index");
      if (p < 0 || p >= n) cur.fail("parent index " + std::to_string(p) + " outside [0, n)");
      try {
        dag.add_edge(p, i);
      } catch (const std::exception& e) {
        cur.fail(e.what());
      }
    }

    auto cpt_line = next_tokens();
    if (cpt_line.empty() || cpt_line[0] != "cpt") cur.fail("expected 'cpt <values>'");
    const std::size_t rows = std::size_t{1} << dag.parent_count(i);
    if (cpt_line.size() != rows + 1) {
      cur.fail("node " + std::to_string(i) + " needs " + std::to_string(rows) +
               " cpt values, got " + std::to_string(cpt_line.size() - 1));
    }
    theta[i].reserve(rows);
    for (std::size_t t = 1; t < cpt_line.size(); ++t) {
      theta[i].push_back(parse_prob(cpt_line[t], cur));
    }
  }
  if (!next_tokens().empty()) cur.fail("unexpected content after the last node");
  if (!dag.is_acyclic()) {
    throw ConfigError(name + ": the parent lists contain a directed cycle");
  }

  bool strict = true;
  for (const auto& table : theta) {
    for (double t : table) {
      if (t < kStrictEps || t > 1.0 - kStrictEps) strict = false;
    }
  }
  return BayesNet(std::move(dag), std::move(theta), strict);
}

BayesNet parse_network(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path + ": cannot open network file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_network_text(buf.str(), path);
}

std::string network_to_text(const BayesNet& net) {
  std::ostringstream out;
  const int n = net.dag().num_nodes();
  out << "n " << n << "\n";
  char buf[32];
  for (int i = 0; i < n; ++i) {
    out << "node " << i << " parents";
    for (int p : net.dag().parents(i)) out << " " << p;
    out << "\ncpt";
    for (double t : net.theta()[i]) {
      std::snprintf(buf, sizeof(buf), "%.17g", t);
      out << " " << buf;
    }
    out << "\n";
  }
  return out.str();
}

void write_network(const BayesNet& net, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError(path + ": cannot open for writing");
  out << network_to_text(net);
  if (!out) throw ConfigError(path + ": write failed");
}

}  // namespace bnlab
