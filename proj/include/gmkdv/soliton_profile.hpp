#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gmkdv/model.hpp"

namespace gmkdv {

// ---------------------------------------------------------------------------
// Right-hand side of the profile equation (dg/deta)^2 = F(g, q).
// ---------------------------------------------------------------------------

/// C(q) = r (3r^2 - q(2+r)) / ((1-r)(4-r^2)).
double profile_constant(double q, double r);

/// F(g, q) = 3g^2 - 2/(2+r) g^(2+r) - 2(3-q)/(2-r) g^(2-r)
///           + (1-q)/(1-r) g^(2-2r) - C(q).
///
/// g = 1 is a double root for every q. Throws DomainError if g < 0 or
/// r is outside (0, 1).
double eval_F(double g, double q, double r);

/// The r = 1/2 factorisation (1/15)(z-1)^2 (-12z^3 + 21z^2 + (20q-6)z + 10q-3),
/// which equals eval_F(z*z, q, 0.5).
double eval_F_poly_half(double z, double q);

struct FDerivatives {
  double first = 0.0;
  double second = 0.0;
  double third = 0.0;
};

/// Analytic g-derivatives of F. Requires g > 0.
FDerivatives eval_F_derivatives(double g, double q, double r);

struct ProfileRoots {
  double g0 = 0.0;  ///< root in (0, 1), the soliton branch
  double g1 = 0.0;  ///< root in (1, inf), the antisoliton branch
};

/// Simple roots of F(., q) on either side of the double root g = 1.
/// r = 1/2 uses the closed-form cubic solution; other r bracket and refine.
/// Throws NoRootError when either root is missing (q <= 0 or C(q) <= 0).
ProfileRoots find_profile_roots(double q, double r);

/// Roots of the r = 1/2 cubic factor found by bisection on z = sqrt(g). Kept
/// separate from the closed form so the two can be cross-checked.
ProfileRoots find_profile_roots_bisection(double q, double r);

// ---------------------------------------------------------------------------
// Traveling waves u = A omega(beta (x - V t - x0) / eps).
// ---------------------------------------------------------------------------

struct SolitonSpec {
  double A = 0.0;
  double x0 = 0.0;
  double V = 0.0;
  double beta = 0.0;
  double q = 0.0;
  double p = 0.0;
  double r = 0.0;
  double g_star = 0.0;
};

/// Solves the amplitude-velocity coupling for a soliton (A > 0) or
/// antisoliton (A < 0).
///
/// For alpha > 0 the velocity is eliminated through
/// V(g) = (c3 A / (1 - g^r) - gamma) / alpha^2 and the remaining scalar
/// equation F(g, q(V(g))) = 0 is solved in g. F is affine in q, so the
/// residual used is q_root(g) - q(V(g)) with q_root(g) = -F(g,0)/F_q(g).
/// For alpha = 0 the root and velocity are explicit.
///
/// Throws NoSolutionError when no admissible root exists and
/// ViolatedConditionError when gamma + alpha^2 V <= 0.
SolitonSpec solve_wave(double A, const ModelParams& params, double x0 = 0.0);

enum class AdmissibilityRegime {
  kTwoIntervals,   ///< alpha > 0, c3^2 > 4 xi gamma_alpha
  kDoubleBranch,   ///< alpha > 0, c3^2 = 4 xi gamma_alpha
  kHalfLine,       ///< alpha > 0, c3^2 < 4 xi gamma_alpha
  kAntisoliton,    ///< alpha > 0, A < 0
  kNoInertia,      ///< alpha = 0
  kDegenerate,     ///< gamma_alpha <= 0 or c3 = 0: no classification
};

std::string to_string(AdmissibilityRegime regime);

/// Amplitude thresholds published for the two reference parameter sets.
/// Missing values are not known for that set.
struct PublishedThresholds {
  double a0_star = 0.0;
  std::optional<double> a0_minus;
  std::optional<double> a0_plus;
};

struct AdmissibilityReport {
  double A = 0.0;
  double gamma_alpha = 0.0;
  double xi = 0.0;
  AdmissibilityRegime regime = AdmissibilityRegime::kDegenerate;
  std::optional<PublishedThresholds> thresholds;
  bool admissible = false;
  std::string reason;
  std::optional<SolitonSpec> wave;
};

/// Published thresholds when params match one of the reference sets.
std::optional<PublishedThresholds> published_thresholds(const ModelParams& params);

/// Verdict is operational: solve_wave must succeed and the solution must
/// pass the root-structure checks. When published thresholds exist for
/// params, A must also lie in the published admissible set.
AdmissibilityReport check_admissible(double A, const ModelParams& params);

/// Series start g(step) for the degenerate problem g' = +-sqrt(F), g(0) = g*:
/// g* + F'/4 s^2 + F'F''/4 s^4/4! + F'(3F'F''' + F''^2)/8 s^6/6!.
double taylor_start(double g_star, double q, double r, double step);

struct ProfileTable {
  double eta_step = 0.0;
  std::vector<double> omega_values;  ///< omega at eta = 0, step, 2 step, ...
  double decay_rate = 0.0;           ///< sqrt(r q)
  double cutoff_eta = 0.0;           ///< last tabulated eta; omega is 0 beyond

  /// Even extension, linear interpolation, zero past the cutoff.
  double omega_at(double eta) const;
};

/// Default profile resolution: min(1e-3, beta h / eps).
double default_eta_step(const SolitonSpec& spec, double h, double epsilon);

/// Classical RK4 for the profile ODE started from taylor_start, converted to
/// omega = (1 - g^r)/p. Integration stops once |omega| < tail_tol.
/// Throws StagnationError if g does not approach 1.
ProfileTable integrate_profile(const SolitonSpec& spec, double eta_step,
                               double tail_tol = 1e-12);

/// u(x_i) = A omega(beta (x_i - V t - x0) / eps).
std::vector<double> sample_wave(const SolitonSpec& spec, const ProfileTable& profile,
                                std::span<const double> x_nodes, double t,
                                const ModelParams& params);

/// A sech(A (x - A^2 t - x0) / eps), the exact soliton of
/// u_t + 6 u^2 u_x + eps^2 u_xxx = 0.
double exact_mkdv(double A, double x, double t, double x0, double eps);

/// Two-column (eta, omega) table with '#' header lines for the wave data.
void write_profile(std::ostream& out, const SolitonSpec& spec, const ProfileTable& profile);

/// A wave that can be evaluated anywhere: either a tabulated profile or the
/// exact mKdV sech soliton.
class TravelingWave {
 public:
  static TravelingWave from_profile(const SolitonSpec& spec, ProfileTable table, double epsilon);
  /// A sech(A (x - A^2 t - x0) / eps), tail cut at |u| < tail_tol |A|.
  static TravelingWave mkdv(double A, double x0, double epsilon, double tail_tol = 1e-12);

  double operator()(double x, double t) const { return amplitude_ * shape(x, t); }
  /// u / A, in [0, 1].
  double shape(double x, double t) const;
  double amplitude() const { return amplitude_; }
  double velocity() const { return velocity_; }
  double center(double t) const { return x0_ + velocity_ * t; }
  /// The wave is treated as zero farther than this from its centre.
  double half_width() const { return half_width_; }
  const std::optional<SolitonSpec>& spec() const { return spec_; }

 private:
  double amplitude_ = 0.0;
  double velocity_ = 0.0;
  double x0_ = 0.0;
  double scale_ = 0.0;  ///< maps x - centre to the profile variable
  double half_width_ = 0.0;
  std::optional<SolitonSpec> spec_;
  std::optional<ProfileTable> table_;
};

}  // namespace gmkdv
