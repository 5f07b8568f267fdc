#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "gmkdv/discrete_core.hpp"
#include "gmkdv/model.hpp"

namespace gmkdv {

struct DiagnosticsRecord {
  double t = 0.0;
  double E1 = 0.0;
  double E2 = 0.0;
  double Delta1 = 0.0;
  double Delta2 = 0.0;
  std::optional<double> Er;
  double boundary_max = 0.0;
};

/// h sum_{i=0}^{I} y_i.
double energy_E1(std::span<const double> y, double h);

/// E2 at the last level of history, computed from scratch. Reference for
/// EnergyAccumulator; history[0] is the initial level.
double energy_E2(std::span<const GridState> history, const Mesh& mesh, const ModelParams& params);

/// max_i |y_i - exact_i|. Throws DomainError on length mismatch.
double error_vs_exact(std::span<const double> y, std::span<const double> exact);

/// Incremental E1/E2 with running drifts. Only the previous level is kept.
class EnergyAccumulator {
 public:
  EnergyAccumulator(const Mesh& mesh, const ModelParams& params, std::span<const double> y0);

  /// Registers the next time level.
  void advance(std::span<const double> y);

  std::size_t level() const { return level_; }
  double E1() const { return E1_; }
  double E2() const { return E2_; }
  double Delta1() const { return Delta1_; }
  double Delta2() const { return Delta2_; }

 private:
  double level_energy(std::span<const double> y) const;

  Mesh mesh_;
  ModelParams params_;
  std::vector<double> prev_;
  std::size_t level_ = 0;
  double accumulated_ = 0.0;
  double E1_0_ = 0.0, E2_0_ = 0.0;
  double E1_ = 0.0, E2_ = 0.0;
  double Delta1_ = 0.0, Delta2_ = 0.0;
};

/// Time series of DiagnosticsRecord, one row per cadence.
class Diagnostics {
 public:
  /// exact(t) samples the exact solution on the mesh nodes, when one exists.
  using ExactFn = std::function<std::vector<double>(double t)>;

  Diagnostics(const Mesh& mesh, const ModelParams& params, std::span<const double> y0,
              ExactFn exact = {}, std::size_t boundary_band = 10);

  /// Registers level j (t = j tau). When record is true the row, including
  /// Er, is stored; otherwise Er is left empty.
  DiagnosticsRecord advance(std::span<const double> y, bool record);
  /// Record for the current level without advancing.
  DiagnosticsRecord current(std::span<const double> y) const;

  const std::vector<DiagnosticsRecord>& records() const { return records_; }
  const EnergyAccumulator& energies() const { return acc_; }
  bool has_exact() const { return static_cast<bool>(exact_); }

 private:
  Mesh mesh_;
  EnergyAccumulator acc_;
  ExactFn exact_;
  std::size_t band_;
  std::vector<DiagnosticsRecord> records_;
};

/// Header "t,E1,E2,Delta1,Delta2,Er,boundary_max"; Er is empty when absent.
void write_diagnostics_csv(std::ostream& out, std::span<const DiagnosticsRecord> rows);

}  // namespace gmkdv
