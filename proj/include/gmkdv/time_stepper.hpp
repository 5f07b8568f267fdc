#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "gmkdv/discrete_core.hpp"
#include "gmkdv/errors.hpp"
#include "gmkdv/model.hpp"
#include "gmkdv/penta_solver.hpp"
#include "gmkdv/soliton_profile.hpp"

namespace gmkdv {

/// Linear system for the next iterate phi given the previous iterate phi_bar
/// and the previous time level y_prev. Rows 3..I-3 hold
///   phi - a^2 e^2 phi_xxb + tau { c0 phi_c + c1 R1(phi_bar, phi)
///     + e^2 (gamma_h phi_xxbc + gamma h phi_xxbx) - e^2 R2(phi_bar, phi) }
///   = y_prev - a^2 e^2 y_prev_xxb + tau { 2 c1 Q1(phi_bar) - e^2 Q2(phi_bar) }
/// with gamma_h = gamma (1 - h). The six pinned rows are identity rows with
/// rhs 0, and interior entries pointing at pinned columns are dropped.
PentaSystem assemble_system(const GridState& phi_bar, const GridState& y_prev, const Mesh& mesh,
                            const ModelParams& params);

/// Increments ||phi(s) - phi(s-1)|| of the last step, s = 1..iterations.
struct StepReport {
  std::vector<double> increments;
  bool diverging = false;
};

/// Owns the buffers for repeated steps on one mesh: phi(s), the previous
/// level and the assembled system. phi(0) is always the previous level.
class Stepper {
 public:
  static constexpr int kDefaultIterations = 2;

  Stepper(const Mesh& mesh, const ModelParams& params, int max_iters = kDefaultIterations);

  /// One time level. Propagates SingularSystemError.
  GridState step(const GridState& y_prev);
  /// Same, overwriting y with the next level.
  void advance(std::vector<double>& y);

  const StepReport& last_report() const { return report_; }
  const SolveStats& solve_stats() const { return stats_; }
  const Mesh& mesh() const { return mesh_; }
  const ModelParams& params() const { return params_; }
  int max_iters() const { return max_iters_; }

 private:
  void assemble(std::span<const double> phi_bar, std::span<const double> y_prev);

  Mesh mesh_;
  ModelParams params_;
  int max_iters_;
  PentaSystem sys_;
  std::vector<double> phi_bar_, phi_;
  std::vector<double> gp_, g0_, gm_, flux_;
  StepReport report_;
  SolveStats stats_;
};

/// Convenience wrapper around a throwaway Stepper.
GridState step(const GridState& y_prev, const Mesh& mesh, const ModelParams& params,
               int max_iters = Stepper::kDefaultIterations);

struct InitResult {
  GridState state;
  std::vector<Warning> warnings;
};

/// Sum of the waves, each node holding the 5-point Gauss-Legendre cell
/// average over [x_i - h/2, x_i + h/2]; the three nodes at each end are 0.
/// Throws DomainTooSmallError when a wave's support reaches [0, 2h] or
/// [L - 2h, L]. Warns when two waves overlap above overlap_tol.
InitResult init_state(std::span<const TravelingWave> waves, const Mesh& mesh,
                      const ModelParams& params, double overlap_tol = 1e-8);

struct StabilityAdvisory {
  double q1_eff = 0.0;  ///< tau / (eps h^2)
  double q2_eff = 0.0;  ///< h / eps
  double q1_limit = 1.0;
  double q2_limit = 1.0;
  bool flagged = false;
  std::string message;
};

StabilityAdvisory check_stability(const Mesh& mesh, const ModelParams& params,
                                  double q1_limit = 1.0, double q2_limit = 1.0);

/// max |y_i| over nodes within `band` nodes of either end.
double boundary_max(std::span<const double> y, std::size_t band = 10);

}  // namespace gmkdv
