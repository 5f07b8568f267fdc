#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace gmkdv {

/// Worst relative defect of one summation or pointwise identity over all
/// samples. The defect is scaled by the size of the terms it cancels.
struct IdentityCheck {
  std::string name;
  double worst = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct IdentitySuiteResult {
  std::vector<IdentityCheck> checks;
  std::size_t samples = 0;
  std::size_t I = 0;
  double seconds = 0.0;
  bool all_passed() const;
};

/// Evaluates the exact algebraic identities of the difference forms on
/// random states vanishing on the pinned nodes (values in [-1, 1], L = 10,
/// c2 and c3 drawn from [0.5, 2.5]).
IdentitySuiteResult run_identity_suite(std::size_t samples = 100, std::size_t I = 256,
                                       std::uint64_t seed = 20240611, double tolerance = 1e-12);

/// One "PASS|FAIL name worst <= tol" line per check.
void print_identity_suite(std::ostream& out, const IdentitySuiteResult& result);

}  // namespace gmkdv
