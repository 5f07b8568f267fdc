#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gmkdv/discrete_core.hpp"
#include "gmkdv/model.hpp"

namespace gmkdv {

struct WaveConfig {
  double A = 0.0;
  double x0 = 0.0;
};

/// One run. Mesh size is given either by I or by h (I wins when both are
/// set); tau defaults to h^2.
struct RunConfig {
  std::string preset = "custom";
  ModelParams model;
  double L = 10.0;
  std::optional<std::size_t> I;
  std::optional<double> h;
  double T = 1.0;
  std::optional<double> tau;
  std::vector<WaveConfig> waves;

  std::string out_dir = "out";
  std::vector<double> snapshot_times;
  std::size_t diag_every = 0;  ///< steps between diagnostics rows; 0 picks ~500 rows
  int max_iters = 2;
  double overlap_tol = 1e-8;

  Mesh mesh() const;
  /// Throws ConfigError (or DomainError from the model) when inconsistent.
  void validate() const;
};

std::vector<std::string> preset_names();

/// mkdv-ex1, mgdp-ex2, mgdp-ex3, the two collision presets, or custom.
/// Throws ConfigError for unknown names.
RunConfig preset_config(std::string_view name);

/// Flat key=value lines, '#' starts a comment. Keys: preset, model.alpha,
/// model.gamma, model.c0..c3, model.epsilon, model.n, mesh.L, mesh.I,
/// mesh.h, mesh.T, mesh.tau (a number or h2), wave.N.A, wave.N.x0,
/// output.dir, output.snapshots, output.every, debug.max_iters,
/// init.overlap_tol. A preset line is applied first wherever it appears.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::string& path);

/// Inverse of parse_config; round-trips every field.
void write_config(std::ostream& out, const RunConfig& config);

/// Comma-separated reals.
std::vector<double> parse_real_list(std::string_view text);

}  // namespace gmkdv
