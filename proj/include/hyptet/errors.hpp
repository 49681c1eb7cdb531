#pragma once

#include <stdexcept>
#include <string>

namespace hyptet {

// A configuration that fails a geometric precondition (Gram validity,
// realizability, degenerate determinant, angle/length range).
class InvalidConfiguration : public std::domain_error {
 public:
  explicit InvalidConfiguration(const std::string& what) : std::domain_error(what) {}
};

// A root-finding failure (no bracket found, iteration cap reached).
class SolverFailure : public std::runtime_error {
 public:
  explicit SolverFailure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hyptet
