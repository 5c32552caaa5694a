#pragma once

#include <string>

#include "bnlab/bayes_net.hpp"

namespace bnlab {

// Textual network format, one network per file:
//   n <count>
//   node <i> parents <j...>
//   cpt <2^{|parents|} values, first listed parent = least significant bit>
// Node indices are 0-based; '#' starts a comment. Every node must appear
// exactly once. Malformed input raises ConfigError with "<name>:<line>:".
// Networks whose entries all lie inside [1e-9, 1-1e-9] are loaded with the
// strictly-positive flag set.
BayesNet parse_network(const std::string& path);
BayesNet parse_network_text(const std::string& text, const std::string& name);

// Writes the same format with full-precision values; parse_network of the
// result reproduces the network exactly.
void write_network(const BayesNet& net, const std::string& path);
std::string network_to_text(const BayesNet& net);

}  // namespace bnlab
