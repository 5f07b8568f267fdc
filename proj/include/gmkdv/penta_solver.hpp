#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace gmkdv {

/// Five-diagonal system. Row i reads
///   a[i] x[i-2] + b[i] x[i-1] + d[i] x[i] + e[i] x[i+1] + f[i] x[i+2] = rhs[i].
/// Entries that would reference columns outside [0, n) must be zero.
struct PentaSystem {
  std::vector<double> a, b, d, e, f, rhs;

  PentaSystem() = default;
  explicit PentaSystem(std::size_t n);

  std::size_t size() const { return d.size(); }
  void resize(std::size_t n);
  void set_identity_row(std::size_t i, double value);

  /// A x.
  std::vector<double> apply(std::span<const double> x) const;
  /// max_i sum_j |A_ij|.
  double norm_inf() const;
  /// Throws DomainError on inconsistent lengths or out-of-range entries.
  void validate() const;
};

/// Arithmetic operation count of the last solves, for the complexity check.
struct SolveStats {
  std::uint64_t flops = 0;
  std::uint64_t solves = 0;
};

/// Banded Gaussian elimination without pivoting followed by back substitution.
/// Throws SingularSystemError when a pivot drops below 1e-14 times the max
/// magnitude of its original row.
std::vector<double> solve_penta(PentaSystem sys, SolveStats* stats = nullptr);

/// Same algorithm, overwriting the bands and rhs of sys. The solution is
/// written to x, which must have length sys.size().
void solve_penta_in_place(PentaSystem& sys, std::span<double> x, SolveStats* stats = nullptr);

}  // namespace gmkdv
