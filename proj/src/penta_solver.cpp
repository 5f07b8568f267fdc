#include "gmkdv/penta_solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "gmkdv/errors.hpp"

namespace gmkdv {
namespace {

constexpr double kPivotGuard = 1e-14;

double row_max(const PentaSystem& s, std::size_t i) {
  return std::max({std::abs(s.a[i]), std::abs(s.b[i]), std::abs(s.d[i]), std::abs(s.e[i]),
                   std::abs(s.f[i])});
}

}  // namespace

PentaSystem::PentaSystem(std::size_t n) { resize(n); }

void PentaSystem::resize(std::size_t n) {
  for (auto* v : {&a, &b, &d, &e, &f, &rhs}) v->assign(n, 0.0);
}

void PentaSystem::set_identity_row(std::size_t i, double value) {
  a[i] = b[i] = e[i] = f[i] = 0.0;
  d[i] = 1.0;
  rhs[i] = value;
}

std::vector<double> PentaSystem::apply(std::span<const double> x) const {
  const std::size_t n = size();
  std::vector<double> y(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double s = d[i] * x[i];
    if (i >= 2) s += a[i] * x[i - 2];
    if (i >= 1) s += b[i] * x[i - 1];
    if (i + 1 < n) s += e[i] * x[i + 1];
    if (i + 2 < n) s += f[i] * x[i + 2];
    y[i] = s;
  }
  return y;
}

double PentaSystem::norm_inf() const {
  double m = 0.0;
  for (std::size_t i = 0; i < size(); ++i) {
    m = std::max(m, std::abs(a[i]) + std::abs(b[i]) + std::abs(d[i]) + std::abs(e[i]) +
                        std::abs(f[i]));
  }
  return m;
}

void PentaSystem::validate() const {
  const std::size_t n = d.size();
  if (a.size() != n || b.size() != n || e.size() != n || f.size() != n || rhs.size() != n) {
    throw DomainError("band lengths differ");
  }
  auto nonzero = [](double v) { return v != 0.0; };
  if ((n > 0 && (nonzero(a[0]) || nonzero(b[0]) || nonzero(e[n - 1]) || nonzero(f[n - 1]))) ||
      (n > 1 && (nonzero(a[1]) || nonzero(f[n - 2])))) {
    throw DomainError("band entry references a column outside the system");
  }
}

std::vector<double> solve_penta(PentaSystem sys, SolveStats* stats) {
  std::vector<double> x(sys.size());
  solve_penta_in_place(sys, x, stats);
  return x;
}

void solve_penta_in_place(PentaSystem& s, std::span<double> x, SolveStats* stats) {
  s.validate();
  const std::size_t n = s.size();
  if (x.size() != n) throw DomainError("solution buffer has the wrong length");
  if (n == 0) return;

  // Original row maxima for the pivot guard. Row k+2 is first modified while
  // eliminating with pivot k, so a three-slot ring is enough.
  std::array<double, 3> scale{};
  scale[0] = row_max(s, 0);
  if (n > 1) scale[1] = row_max(s, 1);
  std::uint64_t ops = 0;

  for (std::size_t k = 0; k < n; ++k) {
    if (k + 2 < n) scale[(k + 2) % 3] = row_max(s, k + 2);
    const double piv = s.d[k];
    if (!(std::abs(piv) >= kPivotGuard * scale[k % 3]) || piv == 0.0) {
      std::ostringstream os;
      os << "pivot " << piv << " at row " << k << " below guard (row max " << scale[k % 3] << ")";
      throw SingularSystemError(os.str());
    }
    if (k + 1 < n && s.b[k + 1] != 0.0) {
      const double m = s.b[k + 1] / piv;
      s.d[k + 1] -= m * s.e[k];
      s.e[k + 1] -= m * s.f[k];
      s.rhs[k + 1] -= m * s.rhs[k];
      s.b[k + 1] = 0.0;
      ops += 7;
    }
    if (k + 2 < n && s.a[k + 2] != 0.0) {
      const double m = s.a[k + 2] / piv;
      s.b[k + 2] -= m * s.e[k];
      s.d[k + 2] -= m * s.f[k];
      s.rhs[k + 2] -= m * s.rhs[k];
      s.a[k + 2] = 0.0;
      ops += 7;
    }
  }

  for (std::size_t k = n; k-- > 0;) {
    double v = s.rhs[k];
    if (k + 1 < n) v -= s.e[k] * x[k + 1];
    if (k + 2 < n) v -= s.f[k] * x[k + 2];
    x[k] = v / s.d[k];
    ops += 5;
  }

  if (stats) {
    stats->flops += ops;
    stats->solves += 1;
  }
}

}  // namespace gmkdv
