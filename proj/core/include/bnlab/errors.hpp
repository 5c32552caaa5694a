#pragma once

#include <stdexcept>
#include <string>

namespace bnlab {

// Requested computation exceeds a documented desk-scale cap (DAG enumeration
// node count, exact-oracle count-vector budget, conditioning-subset search).
class CapacityError : public std::runtime_error {
 public:
  explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed configuration or network file. The message carries file:line
// context when available.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical minimization exhausted its iteration budget without meeting the
// convergence tolerance; carries the best objective value reached.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double best)
      : std::runtime_error(what), best_value(best) {}
  double best_value;
};

}  // namespace bnlab
