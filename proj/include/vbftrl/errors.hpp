#pragma once

#include <stdexcept>
#include <string>

namespace vbftrl {

/// A query left the domain of a function (non-positive tr(A rho),
/// singular rho, stencil stepping outside the PD cone, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Numerical breakdown inside a solver or factorization.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed input file. `line()` is 1-based, 0 when not applicable.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace vbftrl
