#include "gmkdv/soliton_profile.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "gmkdv/errors.hpp"

namespace gmkdv {
namespace {

constexpr double kBracketGap = 1e-12;
constexpr double kUpperBracket = 1e3;

void require_r(double r) {
  if (!(r > 0.0 && r < 1.0)) throw DomainError("r must lie in (0, 1)");
}

/// e^y - 1 - y without cancellation for small |y|.
double expm1_minus_linear(double y) {
  if (std::abs(y) >= 1.0) return std::expm1(y) - y;
  double term = 0.5 * y * y;
  double sum = term;
  for (int k = 3; k < 40; ++k) {
    term *= y / k;
    sum += term;
    if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

/// F written as sum_k a_k g^(e_k) - C with sum_k a_k = C and sum_k a_k e_k = 0,
/// so F(e^x) = sum_k a_k (e^(e_k x) - 1 - e_k x). That form keeps full
/// relative accuracy next to the double root g = 1 where F ~ r q (g-1)^2.
struct FTerms {
  std::array<double, 4> coef{};
  std::array<double, 4> expo{};

  static FTerms at(double q, double r) {
    return FTerms{{3.0, -2.0 / (2.0 + r), -2.0 * (3.0 - q) / (2.0 - r), (1.0 - q) / (1.0 - r)},
                  {2.0, 2.0 + r, 2.0 - r, 2.0 - 2.0 * r}};
  }

  /// d/dq of the coefficients; the same exponents apply.
  static FTerms q_slope(double r) {
    return FTerms{{0.0, 0.0, 2.0 / (2.0 - r), -1.0 / (1.0 - r)},
                  {2.0, 2.0 + r, 2.0 - r, 2.0 - 2.0 * r}};
  }

  double in_log(double x) const {
    double sum = 0.0;
    for (std::size_t k = 0; k < coef.size(); ++k) {
      if (coef[k] != 0.0) sum += coef[k] * expm1_minus_linear(expo[k] * x);
    }
    return sum;
  }
};

double F_in_log(double x, double q, double r) { return FTerms::at(q, r).in_log(x); }

/// Roots of the cubic factor -12z^3 + 21z^2 + (20q-6)z + 10q - 3 in closed form.
std::vector<double> cubic_factor_roots(double q) {
  // Monic form z^3 + a z^2 + b z + c.
  const double a = -21.0 / 12.0;
  const double b = -(20.0 * q - 6.0) / 12.0;
  const double c = -(10.0 * q - 3.0) / 12.0;
  const double shift = -a / 3.0;
  const double pp = b - a * a / 3.0;
  const double qq = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
  const double disc = 0.25 * qq * qq + pp * pp * pp / 27.0;

  std::vector<double> roots;
  if (disc < 0.0) {
    const double m = 2.0 * std::sqrt(-pp / 3.0);
    const double theta = std::acos(std::clamp(3.0 * qq / (pp * m), -1.0, 1.0)) / 3.0;
    for (int k = 0; k < 3; ++k) {
      roots.push_back(m * std::cos(theta - 2.0 * M_PI * k / 3.0) + shift);
    }
  } else {
    const double s = std::sqrt(disc);
    roots.push_back(std::cbrt(-0.5 * qq + s) + std::cbrt(-0.5 * qq - s) + shift);
  }
  // Two Newton sweeps to clean up the trigonometric/cbrt rounding.
  for (double& z : roots) {
    for (int it = 0; it < 2; ++it) {
      const double f = ((z + a) * z + b) * z + c;
      const double df = (3.0 * z + 2.0 * a) * z + b;
      if (df != 0.0) z -= f / df;
    }
  }
  return roots;
}

double bisect(auto&& f, double lo, double hi, int max_iter = 200) {
  double flo = f(lo);
  for (int it = 0; it < max_iter; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Root of F(., q) inside (lo, hi) in g, bracketed in x = ln g, then polished
/// by a few guarded Newton steps in g.
double bracketed_root(double q, double r, double lo, double hi, const char* which) {
  const double xlo = std::log(lo);
  const double xhi = std::log(hi);
  const double flo = F_in_log(xlo, q, r);
  const double fhi = F_in_log(xhi, q, r);
  if (!((flo < 0.0 && fhi > 0.0) || (flo > 0.0 && fhi < 0.0))) {
    std::ostringstream os;
    os << "F(., q=" << q << ") has no sign change for the " << which << " root (r=" << r << ")";
    throw NoRootError(os.str());
  }
  const double x = bisect([&](double s) { return F_in_log(s, q, r); }, xlo, xhi);
  double g = std::exp(x);
  for (int it = 0; it < 5; ++it) {
    const double f = eval_F(g, q, r);
    const double df = eval_F_derivatives(g, q, r).first;
    if (df == 0.0) break;
    const double next = g - f / df;
    if (!(next > lo && next < hi) || std::abs(eval_F(next, q, r)) > std::abs(f)) break;
    g = next;
  }
  return g;
}

/// Velocity-related quantities along the search curve parametrised by x = ln g.
struct CouplingPoint {
  double p;      // 1 - g^r
  double V;
  double q;      // q(V)
  double q_root; // the q for which g is a root of F
};

CouplingPoint coupling_at(double x, double A, const ModelParams& prm, double r) {
  CouplingPoint cp{};
  cp.p = -std::expm1(r * x);
  const double inertia = prm.c3 * A / cp.p;  // gamma + alpha^2 V
  cp.V = (inertia - prm.gamma) / (prm.alpha * prm.alpha);
  cp.q = prm.c3 * prm.c3 * (cp.V - prm.c0) / (prm.c1 * inertia * inertia);
  const double f0 = FTerms::at(0.0, r).in_log(x);
  const double fq = FTerms::q_slope(r).in_log(x);
  cp.q_root = -f0 / fq;
  return cp;
}

void finish_spec(SolitonSpec& spec, const ModelParams& prm) {
  const double inertia = prm.gamma + prm.alpha * prm.alpha * spec.V;
  if (!(inertia > 0.0)) {
    std::ostringstream os;
    os << "gamma + alpha^2 V = " << inertia << " is not positive (A=" << spec.A << ")";
    throw ViolatedConditionError(os.str());
  }
  spec.beta = std::sqrt(prm.c1 * inertia) / (prm.c3 * std::sqrt(spec.r));
  spec.p = prm.c3 * spec.A / inertia;
}

/// Root-structure checks shared by both alpha regimes.
void verify_root_structure(const SolitonSpec& spec) {
  std::ostringstream os;
  if (!(spec.q > 0.0)) {
    os << "q = " << spec.q << " is not positive";
    throw NoSolutionError(os.str());
  }
  if (!(profile_constant(spec.q, spec.r) > 0.0)) {
    os << "C(q) = " << profile_constant(spec.q, spec.r) << " is not positive";
    throw NoSolutionError(os.str());
  }
  ProfileRoots roots;
  try {
    roots = find_profile_roots(spec.q, spec.r);
  } catch (const NoRootError& e) {
    throw NoSolutionError(e.what());
  }
  const double expected = spec.A > 0.0 ? roots.g0 : roots.g1;
  if (std::abs(expected - spec.g_star) > 1e-8 * std::max(1.0, expected)) {
    os << "coupled root " << spec.g_star << " is not the simple root " << expected
       << " of F(., q)";
    throw NoSolutionError(os.str());
  }
}

bool params_match(const ModelParams& a, const ModelParams& b) {
  return a.alpha == b.alpha && a.gamma == b.gamma && a.c0 == b.c0 && a.c1 == b.c1 &&
         a.c2 == b.c2 && a.c3 == b.c3 && a.n == b.n;
}

}  // namespace

double profile_constant(double q, double r) {
  require_r(r);
  return r * (3.0 * r * r - q * (2.0 + r)) / ((1.0 - r) * (4.0 - r * r));
}

double eval_F(double g, double q, double r) {
  require_r(r);
  if (!(g >= 0.0)) throw DomainError("F(g, q) requires g >= 0");
  if (std::abs(g - 1.0) < 0.25) return F_in_log(std::log(g), q, r);
  return 3.0 * g * g - 2.0 / (2.0 + r) * std::pow(g, 2.0 + r) -
         2.0 * (3.0 - q) / (2.0 - r) * std::pow(g, 2.0 - r) +
         (1.0 - q) / (1.0 - r) * std::pow(g, 2.0 - 2.0 * r) - profile_constant(q, r);
}

double eval_F_poly_half(double z, double q) {
  const double cubic = ((-12.0 * z + 21.0) * z + (20.0 * q - 6.0)) * z + 10.0 * q - 3.0;
  return (z - 1.0) * (z - 1.0) * cubic / 15.0;
}

FDerivatives eval_F_derivatives(double g, double q, double r) {
  require_r(r);
  if (!(g > 0.0)) throw DomainError("F derivatives require g > 0");
  const double gr = std::pow(g, r);
  const double gmr = 1.0 / gr;
  FDerivatives d;
  d.first = 6.0 * g - 2.0 * g * gr - 2.0 * (3.0 - q) * g * gmr + 2.0 * (1.0 - q) * g * gmr * gmr;
  d.second = 6.0 - 2.0 * (1.0 + r) * gr - 2.0 * (3.0 - q) * (1.0 - r) * gmr +
             2.0 * (1.0 - q) * (1.0 - 2.0 * r) * gmr * gmr;
  d.third = (-2.0 * r * (1.0 + r) * gr + 2.0 * r * (3.0 - q) * (1.0 - r) * gmr -
             4.0 * r * (1.0 - q) * (1.0 - 2.0 * r) * gmr * gmr) /
            g;
  return d;
}

ProfileRoots find_profile_roots(double q, double r) {
  require_r(r);
  if (r == 0.5) {
    ProfileRoots roots{-1.0, -1.0};
    for (double z : cubic_factor_roots(q)) {
      if (z > 0.0 && z < 1.0) roots.g0 = z * z;
      if (z > 1.0) roots.g1 = z * z;
    }
    if (roots.g0 < 0.0) throw NoRootError("no root of F(., q) in (0, 1): C(q) <= 0 or q <= 0");
    if (roots.g1 < 0.0) throw NoRootError("no root of F(., q) above 1: q <= 0");
    return roots;
  }
  return ProfileRoots{bracketed_root(q, r, kBracketGap, 1.0 - kBracketGap, "lower"),
                      bracketed_root(q, r, 1.0 + kBracketGap, kUpperBracket, "upper")};
}

ProfileRoots find_profile_roots_bisection(double q, double r) {
  require_r(r);
  if (r != 0.5) {
    return ProfileRoots{bracketed_root(q, r, kBracketGap, 1.0 - kBracketGap, "lower"),
                        bracketed_root(q, r, 1.0 + kBracketGap, kUpperBracket, "upper")};
  }
  auto cubic = [q](double z) {
    return ((-12.0 * z + 21.0) * z + (20.0 * q - 6.0)) * z + 10.0 * q - 3.0;
  };
  auto root_in = [&](double lo, double hi) {
    if ((cubic(lo) > 0.0) == (cubic(hi) > 0.0)) throw NoRootError("cubic factor has no sign change");
    const double z = bisect(cubic, lo, hi);
    return z * z;
  };
  return ProfileRoots{root_in(0.0, 1.0), root_in(1.0, std::sqrt(kUpperBracket))};
}

SolitonSpec solve_wave(double A, const ModelParams& params, double x0) {
  params.validate();
  if (A == 0.0) throw NoSolutionError("amplitude must be non-zero");
  if (!(params.c3 > 0.0) || !(params.c2 + params.c3 > 0.0) || !(params.c1 > 0.0)) {
    throw NoSolutionError("profile construction requires c1 > 0 and c3 > 0");
  }
  SolitonSpec spec;
  spec.A = A;
  spec.x0 = x0;
  spec.r = params.r();
  const double r = spec.r;

  if (params.alpha == 0.0) {
    const double base = 1.0 - params.c3 * A / params.gamma;
    if (!(base > 0.0)) throw NoSolutionError("alpha = 0 requires A < gamma / c3");
    spec.g_star = std::pow(base, 1.0 / r);
    const double x = std::log(spec.g_star);
    spec.q = -FTerms::at(0.0, r).in_log(x) / FTerms::q_slope(r).in_log(x);
    spec.V = params.c0 + params.c1 * params.gamma * params.gamma * spec.q / (params.c3 * params.c3);
    finish_spec(spec, params);
    verify_root_structure(spec);
    return spec;
  }

  // Scan |ln g| on a log grid outward from the degenerate limit g -> 1 and
  // take the first sign change of the coupling residual.
  const double sign = A > 0.0 ? -1.0 : 1.0;
  const double far = A > 0.0 ? -std::log(kBracketGap) : std::log(kUpperBracket);
  const double t_lo = std::log(kBracketGap);
  const double t_hi = std::log(far);
  constexpr int kScan = 2000;
  auto residual = [&](double x) {
    const CouplingPoint cp = coupling_at(x, A, params, r);
    return cp.q_root - cp.q;
  };
  double prev_x = sign * std::exp(t_lo);
  double prev_f = residual(prev_x);
  std::optional<double> root;
  for (int k = 1; k <= kScan && !root; ++k) {
    const double x = sign * std::exp(t_lo + (t_hi - t_lo) * k / kScan);
    const double f = residual(x);
    if (std::isfinite(f) && std::isfinite(prev_f) && ((f > 0.0) != (prev_f > 0.0))) {
      root = bisect(residual, std::min(prev_x, x), std::max(prev_x, x));
    }
    prev_x = x;
    prev_f = f;
  }
  if (!root) {
    std::ostringstream os;
    os << "no solution of the amplitude-velocity coupling for A=" << A;
    throw NoSolutionError(os.str());
  }
  const CouplingPoint cp = coupling_at(*root, A, params, r);
  spec.g_star = std::exp(*root);
  spec.V = cp.V;
  spec.q = cp.q;
  finish_spec(spec, params);
  verify_root_structure(spec);
  return spec;
}

std::string to_string(AdmissibilityRegime regime) {
  switch (regime) {
    case AdmissibilityRegime::kTwoIntervals: return "two-intervals";
    case AdmissibilityRegime::kDoubleBranch: return "double-branch";
    case AdmissibilityRegime::kHalfLine: return "half-line";
    case AdmissibilityRegime::kAntisoliton: return "antisoliton";
    case AdmissibilityRegime::kNoInertia: return "no-inertia";
    case AdmissibilityRegime::kDegenerate: return "degenerate";
  }
  return "unknown";
}

std::optional<PublishedThresholds> published_thresholds(const ModelParams& params) {
  if (params_match(params, mgdp_example2_params())) {
    return PublishedThresholds{0.33, 1.9, 2.55};
  }
  if (params_match(params, mgdp_example3_params())) {
    return PublishedThresholds{0.20, std::nullopt, std::nullopt};
  }
  return std::nullopt;
}

AdmissibilityReport check_admissible(double A, const ModelParams& params) {
  AdmissibilityReport rep;
  rep.A = A;
  rep.gamma_alpha = params.gamma + params.alpha * params.alpha * params.c0;
  rep.thresholds = published_thresholds(params);
  if (params.c3 > 0.0) {
    const double r = params.c3 / (params.c2 + params.c3);
    rep.xi = 3.0 * r * r * params.alpha * params.alpha * params.c1 / (2.0 + r);
  }

  if (params.alpha == 0.0) {
    rep.regime = AdmissibilityRegime::kNoInertia;
  } else if (!(params.c3 > 0.0) || !(rep.gamma_alpha > 0.0)) {
    rep.regime = AdmissibilityRegime::kDegenerate;
  } else if (A < 0.0) {
    rep.regime = AdmissibilityRegime::kAntisoliton;
  } else {
    const double lhs = params.c3 * params.c3;
    const double rhs = 4.0 * rep.xi * rep.gamma_alpha;
    if (std::abs(lhs - rhs) <= 1e-12 * std::max(lhs, rhs)) {
      rep.regime = AdmissibilityRegime::kDoubleBranch;
    } else {
      rep.regime = lhs > rhs ? AdmissibilityRegime::kTwoIntervals : AdmissibilityRegime::kHalfLine;
    }
  }

  if (A == 0.0) {
    rep.reason = "amplitude must be non-zero";
    return rep;
  }
  try {
    rep.wave = solve_wave(A, params);
  } catch (const Error& e) {
    rep.reason = e.what();
    return rep;
  }

  if (rep.thresholds && A > 0.0) {
    const PublishedThresholds& t = *rep.thresholds;
    bool inside = A > t.a0_star;
    if (t.a0_minus && t.a0_plus) inside = inside && (A < *t.a0_minus || A > *t.a0_plus);
    if (!inside) {
      std::ostringstream os;
      os << "A=" << A << " lies outside the published admissible set (A0*=" << t.a0_star;
      if (t.a0_minus) os << ", A0-=" << *t.a0_minus;
      if (t.a0_plus) os << ", A0+=" << *t.a0_plus;
      os << ")";
      rep.reason = os.str();
      return rep;
    }
  }
  rep.admissible = true;
  rep.reason = "ok";
  return rep;
}

double taylor_start(double g_star, double q, double r, double step) {
  const FDerivatives d = eval_F_derivatives(g_star, q, r);
  const double s2 = step * step;
  const double s4 = s2 * s2;
  const double s6 = s4 * s2;
  return g_star + 0.25 * s2 * d.first + 0.25 * (s4 / 24.0) * d.first * d.second +
         0.125 * (s6 / 720.0) * d.first * (3.0 * d.first * d.third + d.second * d.second);
}

double ProfileTable::omega_at(double eta) const {
  const double a = std::abs(eta);
  if (omega_values.empty() || a > cutoff_eta) return 0.0;
  const double pos = a / eta_step;
  const auto k = static_cast<std::size_t>(pos);
  if (k + 1 >= omega_values.size()) return omega_values.back();
  const double frac = pos - static_cast<double>(k);
  return omega_values[k] + frac * (omega_values[k + 1] - omega_values[k]);
}

double default_eta_step(const SolitonSpec& spec, double h, double epsilon) {
  return std::min(1e-3, spec.beta * h / epsilon);
}

ProfileTable integrate_profile(const SolitonSpec& spec, double eta_step, double tail_tol) {
  if (!(eta_step > 0.0)) throw DomainError("eta_step must be positive");
  if (!(tail_tol > 0.0 && tail_tol < 1e-3)) throw DomainError("tail_tol must lie in (0, 1e-3)");
  require_r(spec.r);
  if (spec.p == 0.0 || spec.A == 0.0) throw StagnationError("degenerate wave: p = 0");

  const double r = spec.r;
  const double q = spec.q;
  const FTerms terms = FTerms::at(q, r);
  // In x = ln g the flow is dx/deta = +-e^{-x} sqrt(F); g -> 1 means x -> 0.
  const double dir = spec.A > 0.0 ? 1.0 : -1.0;
  auto rhs = [&](double x) {
    return dir * std::exp(-x) * std::sqrt(std::max(terms.in_log(x), 0.0));
  };
  auto omega_of = [&](double x) { return -std::expm1(r * x) / spec.p; };

  ProfileTable table;
  table.eta_step = eta_step;
  table.decay_rate = std::sqrt(r * q);
  table.omega_values.push_back(1.0);

  const double g_start = taylor_start(spec.g_star, q, r, eta_step);
  if (!(g_start > 0.0)) throw StagnationError("series start left the admissible range");
  double x = std::log(g_start);
  double omega = omega_of(x);
  table.omega_values.push_back(omega);

  const double kappa = table.decay_rate > 0.0 ? table.decay_rate : 1e-3;
  const double eta_max = 4.0 * (std::log(1.0 / tail_tol) + 20.0) / kappa + 100.0;
  const auto max_steps = static_cast<std::size_t>(eta_max / eta_step) + 10;

  std::size_t steps = 1;
  while (std::abs(omega) >= tail_tol) {
    if (++steps > max_steps) {
      std::ostringstream os;
      os << "profile did not decay below " << tail_tol << " by eta=" << eta_max
         << " (omega=" << omega << ")";
      throw StagnationError(os.str());
    }
    const double k1 = rhs(x);
    const double k2 = rhs(x + 0.5 * eta_step * k1);
    const double k3 = rhs(x + 0.5 * eta_step * k2);
    const double k4 = rhs(x + eta_step * k3);
    const double next = x + eta_step / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    // g must move monotonically towards 1 without crossing it.
    if (!(next * x > 0.0) || !(std::abs(next) < std::abs(x))) {
      std::ostringstream os;
      os << "profile stalled at g=" << std::exp(x) << " (omega=" << omega << ")";
      throw StagnationError(os.str());
    }
    x = next;
    omega = omega_of(x);
    table.omega_values.push_back(omega);
  }
  table.cutoff_eta = eta_step * static_cast<double>(table.omega_values.size() - 1);
  return table;
}

std::vector<double> sample_wave(const SolitonSpec& spec, const ProfileTable& profile,
                                std::span<const double> x_nodes, double t,
                                const ModelParams& params) {
  std::vector<double> u(x_nodes.size());
  const double scale = spec.beta / params.epsilon;
  const double center = spec.x0 + spec.V * t;
  for (std::size_t i = 0; i < x_nodes.size(); ++i) {
    u[i] = spec.A * profile.omega_at(scale * (x_nodes[i] - center));
  }
  return u;
}

double exact_mkdv(double A, double x, double t, double x0, double eps) {
  return A / std::cosh(A * (x - A * A * t - x0) / eps);
}

void write_profile(std::ostream& out, const SolitonSpec& spec, const ProfileTable& profile) {
  const auto old_precision = out.precision(17);
  out << "# A = " << spec.A << '\n'
      << "# V = " << spec.V << '\n'
      << "# beta = " << spec.beta << '\n'
      << "# q = " << spec.q << '\n'
      << "# p = " << spec.p << '\n'
      << "# r = " << spec.r << '\n'
      << "# g_star = " << spec.g_star << '\n'
      << "# eta_step = " << profile.eta_step << '\n'
      << "# decay_rate = " << profile.decay_rate << '\n'
      << "# cutoff_eta = " << profile.cutoff_eta << '\n'
      << "# eta omega\n";
  for (std::size_t k = 0; k < profile.omega_values.size(); ++k) {
    out << profile.eta_step * static_cast<double>(k) << ' ' << profile.omega_values[k] << '\n';
  }
  out.precision(old_precision);
}

TravelingWave TravelingWave::from_profile(const SolitonSpec& spec, ProfileTable table,
                                          double epsilon) {
  if (!(epsilon > 0.0) || !(spec.beta > 0.0)) throw DomainError("wave needs eps > 0 and beta > 0");
  TravelingWave w;
  w.amplitude_ = spec.A;
  w.velocity_ = spec.V;
  w.x0_ = spec.x0;
  w.scale_ = spec.beta / epsilon;
  w.half_width_ = table.cutoff_eta / w.scale_;
  w.spec_ = spec;
  w.table_ = std::move(table);
  return w;
}

TravelingWave TravelingWave::mkdv(double A, double x0, double epsilon, double tail_tol) {
  if (A == 0.0 || !(epsilon > 0.0)) throw DomainError("mKdV wave needs A != 0 and eps > 0");
  TravelingWave w;
  w.amplitude_ = A;
  w.velocity_ = A * A;
  w.x0_ = x0;
  w.scale_ = std::abs(A) / epsilon;
  w.half_width_ = std::acosh(1.0 / tail_tol) / w.scale_;
  return w;
}

double TravelingWave::shape(double x, double t) const {
  const double z = scale_ * (x - center(t));
  if (table_) return table_->omega_at(z);
  if (std::abs(z) > scale_ * half_width_) return 0.0;
  return 1.0 / std::cosh(z);
}

}  // namespace gmkdv
