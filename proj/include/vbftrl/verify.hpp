#pragma once
// Property suites behind `vbftrl verify`. Each check family is run over a
// batch of seeded random instances and reported as one line with the worst
// instance's gap, the tolerance and the verdict.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace vbftrl {

enum class Criterion {
  at_most,   // pass iff gap <= tol (errors, distances)
  at_least,  // pass iff gap >= -tol (normalized inequality gaps)
  flag,      // pass iff gap == 0 (counts of violations)
};

struct CheckResult {
  std::string suite;
  std::string name;    // e.g. "R.order3"
  std::string config;  // e.g. "d=2 t=1"
  std::uint64_t seed = 0;
  int instances = 0;
  double gap = 0.0;    // worst instance
  double tol = 0.0;
  Criterion criterion = Criterion::at_most;
  bool pass = false;
};

struct VerifyOptions {
  std::uint64_t seed = 1;
  int instances = 0;  // per configuration; 0 selects the suite default
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  int failures() const;
  bool ok() const { return failures() == 0; }
};

/// kron, derivs, vbc, sc, sandwich, ineqs, ellipsoid
const std::vector<std::string>& verify_suites();
/// Default instance count per configuration for a suite.
int default_instances(const std::string& suite);

/// Runs one suite or "all". Throws ConfigError on an unknown selector.
VerifyReport run_verify(const std::string& suite, const VerifyOptions& options = {});

/// "PASS derivs R.order3 d=2 t=1 seed=1 n=100 gap=1.2e-07 tol=1e-04 (<=)"
std::string format_check(const CheckResult& check);
void print_report(std::ostream& out, const VerifyReport& report);

}  // namespace vbftrl
