#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gmkdv/diagnostics.hpp"
#include "gmkdv/errors.hpp"
#include "gmkdv/run_config.hpp"
#include "gmkdv/soliton_profile.hpp"
#include "gmkdv/time_stepper.hpp"

namespace gmkdv {

struct Peak {
  double x = 0.0;
  double value = 0.0;
};

/// Local extrema of +y and -y above threshold, refined by a parabola
/// through the three nodes around each; sorted by x.
std::vector<Peak> find_peaks(std::span<const double> y, const Mesh& mesh, double threshold);

struct PeakTrack {
  double t = 0.0;
  std::vector<Peak> peaks;
};

/// Builds the sampled waves of a config: exact sech solitons for the mKdV
/// model, integrated profiles otherwise. Every amplitude must pass
/// check_admissible; failures raise NoSolutionError.
std::vector<TravelingWave> build_waves(const RunConfig& config, const Mesh& mesh);

struct RunSummary {
  RunConfig config;
  Mesh mesh;
  std::vector<SolitonSpec> wave_specs;  ///< empty for sech waves
  std::vector<DiagnosticsRecord> records;
  std::vector<PeakTrack> peaks;
  std::vector<Warning> warnings;
  StabilityAdvisory stability;
  std::size_t steps = 0;
  double wall_seconds = 0.0;

  std::size_t diverging_steps = 0;        ///< some increment grew
  std::size_t non_contracting_steps = 0;  ///< increments not strictly decreasing
  double max_boundary = 0.0;

  /// Single-wave runs: peak nearest the wave's sign, fitted linearly in t.
  std::optional<double> fitted_speed;
  std::optional<double> max_amplitude_deviation;  ///< max |peak - A| / |A|

  /// Two-wave runs: first record time at which the undisturbed waves would
  /// overlap at 1% of their amplitudes, and Delta1 just before it.
  std::optional<double> interaction_time;
  std::optional<double> delta1_before_interaction;

  const DiagnosticsRecord& final_record() const { return records.back(); }
};

/// Observer invoked after every step with the level index and the stepper.
using StepObserver = std::function<void(std::size_t j, const Stepper& stepper)>;

struct RunOptions {
  bool write_files = true;
  StepObserver observer;
};

/// init_state, then J steps. Writes diagnostics.csv, peaks.csv, summary.txt,
/// the snapshots and gnuplot scripts into config.out_dir when requested.
/// Throws BlowUpError when max|y| exceeds 1e3 max|A| or turns non-finite.
RunSummary run_experiment(const RunConfig& config, const RunOptions& options = {});

void write_summary(std::ostream& out, const RunSummary& summary);

struct ConvergenceRow {
  double h = 0.0;
  std::size_t I = 0;
  double tau = 0.0;
  std::optional<double> Er;
  double Delta1 = 0.0;
  double Delta2 = 0.0;
  bool ok = false;
  std::string message;
};

/// One run per h with tau = h^2 and T = 1, each in its own subdirectory.
/// A failing row is recorded and the sweep continues. Rows run on up to
/// `jobs` threads; results do not depend on the thread count.
std::vector<ConvergenceRow> run_convergence(const RunConfig& config, std::span<const double> h_list,
                                            bool write_files = true, unsigned jobs = 1);

/// One line per h: h,I,tau,Er,Delta1,Delta2,status,message.
void write_convergence_csv(std::ostream& out, std::span<const ConvergenceRow> rows);
/// Transposed layout: a row per quantity, a column per h.
void write_convergence_table(std::ostream& out, std::span<const ConvergenceRow> rows);

struct ProfileEmission {
  AdmissibilityReport report;
  std::vector<std::string> files;
};

/// Profile data for amplitude A under the config's model: (eta, omega)
/// table, (x, u) at t = 0 on the config mesh with the wave centred at L/2,
/// and F(g) over [0, 1.2 g1]. Throws NoSolutionError for inadmissible A.
ProfileEmission emit_profile(double A, const RunConfig& config, const std::string& out_dir);

/// F(g, q) sampled at n+1 points of [0, g_max] as "g F" lines.
void write_F_curve(std::ostream& out, double q, double r, double g_max, std::size_t n = 600);

}  // namespace gmkdv
