#include "gmkdv/time_stepper.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace gmkdv {
namespace {

// 5-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 5> kGaussNodes{-0.9061798459386639927976269, -0.5384693101056830910363144,
                                            0.0, 0.5384693101056830910363144,
                                            0.9061798459386639927976269};
constexpr std::array<double, 5> kGaussWeights{0.2369268850561890875142640, 0.4786286704993664680412915,
                                              0.5688888888888888888888889, 0.4786286704993664680412915,
                                              0.2369268850561890875142640};

double increment_norm(std::span<const double> a, std::span<const double> b, double h) {
  double s = 0.0;
  for (std::size_t i = 1; i + 1 < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(h * s);
}

/// Fills sys for the given phi_bar and y_prev. gp/g0/gm/flux are scratch
/// buffers of length I+1.
void fill_system(PentaSystem& sys, std::span<const double> u, std::span<const double> y,
                 const Mesh& mesh, const ModelParams& prm, std::vector<double>& gp,
                 std::vector<double>& g0, std::vector<double>& gm, std::vector<double>& flux) {
  const std::size_t n = u.size();
  const std::size_t I = n - 1;
  if (y.size() != n || I != mesh.I) throw DomainError("state length does not match the mesh");
  sys.resize(n);
  gp.resize(n);
  g0.resize(n);
  gm.resize(n);
  flux.resize(n);

  const double h = mesh.h, tau = mesh.tau, eps2 = prm.epsilon * prm.epsilon;
  const double A2 = prm.alpha * prm.alpha * eps2 / (h * h);
  const double C0 = tau * prm.c0 / (2.0 * h);
  const double Gh = tau * eps2 * prm.gamma * (1.0 - h) / (2.0 * h * h * h);
  const double Gx = tau * eps2 * prm.gamma / (h * h);
  const double C1 = tau * prm.c1 / (4.0 * h);
  const double S2 = -tau * eps2 / (2.0 * h);
  const double c2 = prm.c2, c3 = prm.c3, cd = prm.c2 - prm.c3;

  // Per-node coefficients of the R2 flux, and the Q2 flux of phi_bar, on
  // k = 2..I-2 (all that rows 3..I-3 touch).
  for (std::size_t k = 2; k + 2 <= I; ++k) {
    const double ua = (u[k + 1] - u[k]) / h;
    const double ub = (u[k] - u[k - 1]) / h;
    const double uc = (ua - ub) / h;
    gp[k] = cd * ub / h + c3 * (u[k] / (h * h) + ua / h);
    g0[k] = cd * (ua - ub) / h + c3 * (-2.0 * u[k] / (h * h) - ua / h + ub / h + uc);
    gm[k] = -cd * ua / h + c3 * (u[k] / (h * h) - ub / h);
    flux[k] = c2 * ua * ub + 0.5 * c3 * (2.0 * u[k] * uc + ua * ua - 2.0 * ua * ub + ub * ub);
  }

  for (std::size_t l = 0; l < GridState::kPinned; ++l) {
    sys.set_identity_row(l, 0.0);
    sys.set_identity_row(I - l, 0.0);
  }

  const double inv2h = 0.5 / h;
  for (std::size_t i = 3; i + 3 <= I; ++i) {
    const double um = u[i - 1], u0 = u[i], up = u[i + 1];
    sys.a[i] = -Gh - S2 * gm[i - 1];
    sys.b[i] = -A2 - C0 + 2.0 * Gh - Gx - C1 * (u0 * u0 + 2.0 * u0 * um + 3.0 * um * um) -
               S2 * g0[i - 1];
    sys.d[i] = 1.0 + 2.0 * A2 + 3.0 * Gx +
               C1 * (2.0 * u0 * (up - um) + up * up - um * um) + S2 * (gm[i + 1] - gp[i - 1]);
    sys.e[i] = -A2 + C0 - 2.0 * Gh - 3.0 * Gx + C1 * (u0 * u0 + 2.0 * u0 * up + 3.0 * up * up) +
               S2 * g0[i + 1];
    sys.f[i] = Gh + Gx + S2 * gp[i + 1];

    const double q1 = 0.5 * (u0 * u0 * (up - um) * inv2h + u0 * (up * up - um * um) * inv2h +
                             (up * up * up - um * um * um) * inv2h);
    const double q2 = (flux[i + 1] - flux[i - 1]) * inv2h;
    const double lap = (y[i + 1] - 2.0 * y[i] + y[i - 1]) / (h * h);
    sys.rhs[i] = y[i] - prm.alpha * prm.alpha * eps2 * lap + tau * (2.0 * prm.c1 * q1 - eps2 * q2);
  }

  // Pinned nodes are zero; drop the couplings to them.
  sys.a[3] = sys.b[3] = 0.0;
  sys.a[4] = 0.0;
  sys.e[I - 3] = sys.f[I - 3] = 0.0;
  sys.f[I - 4] = 0.0;
}

}  // namespace

PentaSystem assemble_system(const GridState& phi_bar, const GridState& y_prev, const Mesh& mesh,
                            const ModelParams& params) {
  if (!phi_bar.satisfies_boundary() || !y_prev.satisfies_boundary()) {
    throw DomainError("assemble_system: states must vanish on the pinned nodes");
  }
  PentaSystem sys;
  std::vector<double> gp, g0, gm, flux;
  fill_system(sys, phi_bar.values(), y_prev.values(), mesh, params, gp, g0, gm, flux);
  return sys;
}

Stepper::Stepper(const Mesh& mesh, const ModelParams& params, int max_iters)
    : mesh_(mesh), params_(params), max_iters_(max_iters) {
  params_.validate();
  if (max_iters_ < 1) throw DomainError("max_iters must be at least 1");
  if (mesh_.I < 16) throw DomainError("mesh needs I >= 16");
  sys_.resize(mesh_.I + 1);
  phi_bar_.assign(mesh_.I + 1, 0.0);
  phi_.assign(mesh_.I + 1, 0.0);
}

void Stepper::assemble(std::span<const double> phi_bar, std::span<const double> y_prev) {
  fill_system(sys_, phi_bar, y_prev, mesh_, params_, gp_, g0_, gm_, flux_);
}

void Stepper::advance(std::vector<double>& y) {
  if (y.size() != mesh_.I + 1) throw DomainError("state length does not match the mesh");
  report_.increments.clear();
  report_.diverging = false;
  phi_bar_ = y;
  for (int s = 1; s <= max_iters_; ++s) {
    assemble(phi_bar_, y);
    solve_penta_in_place(sys_, phi_, &stats_);
    report_.increments.push_back(increment_norm(phi_, phi_bar_, mesh_.h));
    phi_bar_.swap(phi_);
  }
  for (std::size_t s = 1; s < report_.increments.size(); ++s) {
    if (report_.increments[s] > report_.increments[s - 1]) report_.diverging = true;
  }
  y.swap(phi_bar_);
}

GridState Stepper::step(const GridState& y_prev) {
  if (!y_prev.satisfies_boundary()) throw DomainError("step: state must vanish on the pinned nodes");
  std::vector<double> y(y_prev.values().begin(), y_prev.values().end());
  advance(y);
  return GridState(std::move(y));
}

GridState step(const GridState& y_prev, const Mesh& mesh, const ModelParams& params,
               int max_iters) {
  Stepper stepper(mesh, params, max_iters);
  return stepper.step(y_prev);
}

InitResult init_state(std::span<const TravelingWave> waves, const Mesh& mesh,
                      const ModelParams& params, double overlap_tol) {
  params.validate();
  InitResult out{GridState(mesh.I), {}};
  const double lo = 2.0 * mesh.h;
  const double hi = mesh.L - 2.0 * mesh.h;
  for (const TravelingWave& w : waves) {
    const double c = w.center(0.0);
    if (!(c - w.half_width() > lo && c + w.half_width() < hi)) {
      std::ostringstream os;
      os << "wave A=" << w.amplitude() << " at x0=" << c << " has support [" << c - w.half_width()
         << ", " << c + w.half_width() << "] reaching the boundary bands of [0, " << mesh.L << "]";
      throw DomainTooSmallError(os.str());
    }
  }

  std::vector<double>& y = out.state.data();
  const double half = 0.5 * mesh.h;
  for (const TravelingWave& w : waves) {
    for (std::size_t i = GridState::kPinned; i + GridState::kPinned <= mesh.I; ++i) {
      const double xi = mesh.x(i);
      double avg = 0.0;
      for (std::size_t k = 0; k < kGaussNodes.size(); ++k) {
        avg += kGaussWeights[k] * w(xi + half * kGaussNodes[k], 0.0);
      }
      y[i] += 0.5 * avg;
    }
  }

  for (std::size_t a = 0; a < waves.size(); ++a) {
    for (std::size_t b = a + 1; b < waves.size(); ++b) {
      double worst = 0.0;
      for (std::size_t i = 0; i <= mesh.I; ++i) {
        const double x = mesh.x(i);
        worst = std::max(worst, std::min(waves[a].shape(x, 0.0), waves[b].shape(x, 0.0)));
      }
      if (worst > overlap_tol) {
        std::ostringstream os;
        os << "waves " << a + 1 << " and " << b + 1 << " overlap: max min(|w1|,|w2|) = " << worst
           << " > " << overlap_tol;
        out.warnings.push_back({WarningKind::kOverlap, os.str()});
      }
    }
  }
  return out;
}

StabilityAdvisory check_stability(const Mesh& mesh, const ModelParams& params, double q1_limit,
                                  double q2_limit) {
  StabilityAdvisory adv;
  adv.q1_limit = q1_limit;
  adv.q2_limit = q2_limit;
  adv.q1_eff = mesh.tau / (params.epsilon * mesh.h * mesh.h);
  adv.q2_eff = mesh.h / params.epsilon;
  std::ostringstream os;
  if (adv.q1_eff > q1_limit) {
    os << "tau/(eps h^2) = " << adv.q1_eff << " exceeds " << q1_limit << "; ";
    adv.flagged = true;
  }
  if (adv.q2_eff > q2_limit) {
    os << "h/eps = " << adv.q2_eff << " exceeds " << q2_limit << "; ";
    adv.flagged = true;
  }
  adv.message = os.str();
  if (!adv.message.empty()) adv.message.resize(adv.message.size() - 2);
  return adv;
}

double boundary_max(std::span<const double> y, std::size_t band) {
  double m = 0.0;
  const std::size_t n = y.size();
  for (std::size_t i = 0; i < n && i <= band; ++i) {
    m = std::max({m, std::abs(y[i]), std::abs(y[n - 1 - i])});
  }
  return m;
}

}  // namespace gmkdv
