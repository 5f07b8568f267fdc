#include "gmkdv/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

namespace gmkdv {
namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  return out;
}

std::string fixed(double v, int digits) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

void write_snapshot(const fs::path& path, std::span<const double> y, const Mesh& mesh,
                    const ModelParams& params, double t) {
  std::ofstream out = open_out(path);
  out.precision(17);
  out << "# t = " << t << "\n# h = " << mesh.h << "\n# tau = " << mesh.tau << "\n# L = " << mesh.L
      << "\n# params: " << describe(params) << "\n# x u\n";
  for (std::size_t i = 0; i < y.size(); ++i) out << mesh.x(i) << ' ' << y[i] << '\n';
}

double max_abs(std::span<const double> y) {
  double m = 0.0;
  for (double v : y) {
    if (!std::isfinite(v)) return std::numeric_limits<double>::infinity();
    m = std::max(m, std::abs(v));
  }
  return m;
}

// Collision onset: the undisturbed waves meet at 1% of their amplitudes.
// The init overlap tolerance is far smaller and is crossed by the tails
// almost at once, so it says nothing about when the waves interact.
constexpr double kInteractionOverlap = 1e-2;

/// max over nodes of min(|shape_a|, |shape_b|) for the undisturbed waves at t.
double overlap_at(const TravelingWave& a, const TravelingWave& b, const Mesh& mesh, double t) {
  double worst = 0.0;
  for (std::size_t i = 0; i <= mesh.I; ++i) {
    const double x = mesh.x(i);
    worst = std::max(worst, std::min(a.shape(x, t), b.shape(x, t)));
  }
  return worst;
}

void write_plot_scripts(const fs::path& dir, const std::vector<std::string>& snapshots,
                        bool has_exact) {
  {
    std::ofstream gp = open_out(dir / "plot_diagnostics.gp");
    gp << "set datafile separator ','\nset key autotitle columnhead\nset logscale y\n"
          "set xlabel 't'\nset terminal pngcairo size 900,600\n"
          "set output 'diagnostics.png'\n"
          "plot 'diagnostics.csv' using 1:4 with lines, '' using 1:5 with lines";
    if (has_exact) gp << ", '' using 1:6 with lines";
    gp << '\n';
  }
  std::ofstream gp = open_out(dir / "plot_snapshots.gp");
  gp << "set xlabel 'x'\nset ylabel 'u'\nset terminal pngcairo size 900,600\n"
        "set output 'snapshots.png'\n";
  if (snapshots.empty()) {
    gp << "# no snapshots were requested\n";
    return;
  }
  gp << "plot ";
  for (std::size_t k = 0; k < snapshots.size(); ++k) {
    gp << (k ? ", " : "") << "'" << snapshots[k] << "' using 1:2 with lines title '" << snapshots[k]
       << "'";
  }
  gp << '\n';
}

}  // namespace

std::vector<Peak> find_peaks(std::span<const double> y, const Mesh& mesh, double threshold) {
  std::vector<Peak> peaks;
  for (double sign : {1.0, -1.0}) {
    for (std::size_t i = 1; i + 1 < y.size(); ++i) {
      const double a = sign * y[i - 1], b = sign * y[i], c = sign * y[i + 1];
      if (!(b > threshold && b >= a && b > c)) continue;
      const double curv = a - 2.0 * b + c;
      const double off = curv != 0.0 ? 0.5 * (a - c) / curv : 0.0;
      peaks.push_back({mesh.x(i) + off * mesh.h, sign * (b - 0.25 * (a - c) * off)});
    }
  }
  std::sort(peaks.begin(), peaks.end(), [](const Peak& p, const Peak& q) { return p.x < q.x; });
  return peaks;
}

std::vector<TravelingWave> build_waves(const RunConfig& config, const Mesh& mesh) {
  std::vector<TravelingWave> waves;
  for (const WaveConfig& w : config.waves) {
    if (config.model.is_mkdv()) {
      waves.push_back(TravelingWave::mkdv(w.A, w.x0, config.model.epsilon));
      continue;
    }
    const AdmissibilityReport rep = check_admissible(w.A, config.model);
    if (!rep.admissible || !rep.wave) {
      throw NoSolutionError("amplitude " + std::to_string(w.A) + " rejected: " + rep.reason);
    }
    SolitonSpec spec = *rep.wave;
    spec.x0 = w.x0;
    ProfileTable table =
        integrate_profile(spec, default_eta_step(spec, mesh.h, config.model.epsilon));
    waves.push_back(TravelingWave::from_profile(spec, std::move(table), config.model.epsilon));
  }
  return waves;
}

RunSummary run_experiment(const RunConfig& config, const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  config.validate();
  RunSummary s;
  s.config = config;
  s.mesh = config.mesh();
  const Mesh& mesh = s.mesh;
  const ModelParams& prm = config.model;

  s.stability = check_stability(mesh, prm);
  if (s.stability.flagged) s.warnings.push_back({WarningKind::kStability, s.stability.message});

  const std::vector<TravelingWave> waves = build_waves(config, mesh);
  for (const TravelingWave& w : waves) {
    if (w.spec()) s.wave_specs.push_back(*w.spec());
  }
  InitResult init = init_state(waves, mesh, prm, config.overlap_tol);
  for (Warning& w : init.warnings) s.warnings.push_back(std::move(w));
  std::vector<double> y = std::move(init.state.data());

  Diagnostics::ExactFn exact;
  if (prm.is_mkdv() && waves.size() == 1) {
    const TravelingWave wave = waves.front();
    exact = [wave, mesh](double t) {
      std::vector<double> e(mesh.I + 1);
      for (std::size_t i = 0; i <= mesh.I; ++i) e[i] = wave(mesh.x(i), t);
      return e;
    };
  }
  Diagnostics diag(mesh, prm, y, exact);
  Stepper stepper(mesh, prm, config.max_iters);

  double max_amp = 0.0;
  double min_amp = std::numeric_limits<double>::infinity();
  for (const WaveConfig& w : config.waves) {
    max_amp = std::max(max_amp, std::abs(w.A));
    min_amp = std::min(min_amp, std::abs(w.A));
  }
  const double peak_threshold = waves.empty() ? 0.0 : 0.2 * min_amp;
  const double blowup_level = 1e3 * std::max(max_amp, 1e-300);
  const std::size_t every =
      config.diag_every ? config.diag_every : std::max<std::size_t>(1, mesh.J / 500);

  const fs::path dir(config.out_dir);
  if (options.write_files) fs::create_directories(dir);
  std::vector<std::pair<std::size_t, double>> snaps;
  for (double t : config.snapshot_times) {
    const auto j = static_cast<std::size_t>(std::llround(t / mesh.tau));
    snaps.emplace_back(std::min(j, mesh.J), t);
  }
  std::sort(snaps.begin(), snaps.end());
  std::vector<std::string> snapshot_files;
  auto maybe_snapshot = [&](std::size_t j) {
    if (!options.write_files) return;
    for (const auto& [sj, t] : snaps) {
      if (sj != j) continue;
      const std::string name = "snapshot_t" + fixed(mesh.tau * static_cast<double>(j), 6) + ".dat";
      if (std::find(snapshot_files.begin(), snapshot_files.end(), name) != snapshot_files.end()) {
        continue;
      }
      write_snapshot(dir / name, y, mesh, prm, mesh.tau * static_cast<double>(j));
      snapshot_files.push_back(name);
    }
  };

  auto track = [&](double t) {
    if (!waves.empty()) s.peaks.push_back({t, find_peaks(y, mesh, peak_threshold)});
    if (waves.size() == 2 && !s.interaction_time &&
        overlap_at(waves[0], waves[1], mesh, t) > kInteractionOverlap) {
      s.interaction_time = t;
    }
    if (waves.size() == 2 && !s.interaction_time) {
      s.delta1_before_interaction = diag.energies().Delta1();
    }
  };

  track(0.0);
  maybe_snapshot(0);
  s.max_boundary = diag.records().front().boundary_max;
  bool boundary_warned = false;
  const double boundary_limit = prm.epsilon * prm.epsilon;

  for (std::size_t j = 1; j <= mesh.J; ++j) {
    stepper.advance(y);
    const StepReport& rep = stepper.last_report();
    if (rep.diverging) ++s.diverging_steps;
    for (std::size_t k = 1; k < rep.increments.size(); ++k) {
      if (!(rep.increments[k] < rep.increments[k - 1])) {
        ++s.non_contracting_steps;
        break;
      }
    }
    const double ymax = max_abs(y);
    if (!(ymax <= blowup_level)) {
      std::ostringstream os;
      os << "blow-up at step " << j << " (t=" << mesh.tau * static_cast<double>(j)
         << "): max|y| = " << ymax;
      throw BlowUpError(os.str());
    }
    const bool record = (j % every == 0) || j == mesh.J;
    const DiagnosticsRecord rec = diag.advance(y, record);
    s.max_boundary = std::max(s.max_boundary, rec.boundary_max);
    if (!boundary_warned && !waves.empty() && rec.boundary_max >= boundary_limit) {
      boundary_warned = true;
      std::ostringstream os;
      os << "max|y| near the boundary reached " << rec.boundary_max << " >= eps^2 at t=" << rec.t;
      s.warnings.push_back({WarningKind::kBoundarySmallness, os.str()});
    }
    if (record) track(rec.t);
    maybe_snapshot(j);
    if (options.observer) options.observer(j, stepper);
  }
  s.steps = mesh.J;
  s.records = diag.records();
  if (s.diverging_steps > 0) {
    s.warnings.push_back({WarningKind::kDivergence,
                          std::to_string(s.diverging_steps) + " steps had growing iterate increments"});
  }

  if (waves.size() == 1) {
    // Dominant extremum with the wave's sign.
    const double sign = config.waves.front().A > 0.0 ? 1.0 : -1.0;
    const double A = config.waves.front().A;
    std::vector<double> ts, xs;
    double dev = 0.0;
    for (const PeakTrack& pt : s.peaks) {
      const Peak* best = nullptr;
      for (const Peak& p : pt.peaks) {
        if (sign * p.value > 0.0 && (!best || sign * p.value > sign * best->value)) best = &p;
      }
      if (!best) continue;
      ts.push_back(pt.t);
      xs.push_back(best->x);
      dev = std::max(dev, std::abs(best->value - A) / std::abs(A));
    }
    if (ts.size() >= 2) {
      const double n = static_cast<double>(ts.size());
      double st = 0, sx = 0, stt = 0, stx = 0;
      for (std::size_t k = 0; k < ts.size(); ++k) {
        st += ts[k];
        sx += xs[k];
        stt += ts[k] * ts[k];
        stx += ts[k] * xs[k];
      }
      s.fitted_speed = (n * stx - st * sx) / (n * stt - st * st);
    }
    if (!ts.empty()) s.max_amplitude_deviation = dev;
  }

  s.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (options.write_files) {
    {
      std::ofstream out = open_out(dir / "diagnostics.csv");
      write_diagnostics_csv(out, s.records);
    }
    {
      std::ofstream out = open_out(dir / "peaks.csv");
      out.precision(17);
      out << "t,index,x,value\n";
      for (const PeakTrack& pt : s.peaks) {
        for (std::size_t k = 0; k < pt.peaks.size(); ++k) {
          out << pt.t << ',' << k << ',' << pt.peaks[k].x << ',' << pt.peaks[k].value << '\n';
        }
      }
    }
    {
      std::ofstream out = open_out(dir / "config.txt");
      write_config(out, config);
    }
    write_plot_scripts(dir, snapshot_files, diag.has_exact());
    std::ofstream out = open_out(dir / "summary.txt");
    write_summary(out, s);
  }
  return s;
}

void write_summary(std::ostream& out, const RunSummary& s) {
  const auto old = out.precision(17);
  const DiagnosticsRecord& f = s.final_record();
  out << "preset = " << s.config.preset << '\n'
      << "model = " << describe(s.config.model) << '\n'
      << "L = " << s.mesh.L << "\nI = " << s.mesh.I << "\nh = " << s.mesh.h
      << "\ntau = " << s.mesh.tau << "\nT = " << s.mesh.T << "\nsteps = " << s.steps
      << "\nmax_iters = " << s.config.max_iters << '\n'
      << "Delta1 = " << f.Delta1 << "\nDelta2 = " << f.Delta2 << '\n'
      << "Er = ";
  if (f.Er) out << *f.Er;
  else out << "n/a";
  out << "\nE1_final = " << f.E1 << "\nE2_final = " << f.E2
      << "\nboundary_max_final = " << f.boundary_max << "\nboundary_max_peak = " << s.max_boundary
      << '\n';
  for (std::size_t k = 0; k < s.config.waves.size(); ++k) {
    out << "wave." << k + 1 << ".A = " << s.config.waves[k].A << '\n'
        << "wave." << k + 1 << ".x0 = " << s.config.waves[k].x0 << '\n';
  }
  for (std::size_t k = 0; k < s.wave_specs.size(); ++k) {
    const SolitonSpec& w = s.wave_specs[k];
    out << "wave." << k + 1 << ".V = " << w.V << '\n'
        << "wave." << k + 1 << ".beta = " << w.beta << '\n'
        << "wave." << k + 1 << ".q = " << w.q << '\n'
        << "wave." << k + 1 << ".g_star = " << w.g_star << '\n';
  }
  if (!s.peaks.empty()) {
    const PeakTrack& first = s.peaks.front();
    const PeakTrack& last = s.peaks.back();
    out << "peaks.initial = ";
    for (const Peak& p : first.peaks) out << '(' << p.x << ", " << p.value << ") ";
    out << "\npeaks.final = ";
    for (const Peak& p : last.peaks) out << '(' << p.x << ", " << p.value << ") ";
    out << '\n';
  }
  if (s.fitted_speed) out << "peak_speed_fit = " << *s.fitted_speed << '\n';
  if (s.max_amplitude_deviation) {
    out << "peak_amplitude_max_rel_deviation = " << *s.max_amplitude_deviation << '\n';
  }
  if (s.interaction_time) out << "interaction_time = " << *s.interaction_time << '\n';
  if (s.delta1_before_interaction) {
    out << "Delta1_before_interaction = " << *s.delta1_before_interaction << '\n';
  }
  out << "stability.q1_eff = " << s.stability.q1_eff << "\nstability.q2_eff = "
      << s.stability.q2_eff << "\nstability.flagged = " << (s.stability.flagged ? "yes" : "no")
      << "\ndiverging_steps = " << s.diverging_steps
      << "\nnon_contracting_steps = " << s.non_contracting_steps
      << "\nwall_seconds = " << s.wall_seconds << '\n'
      << "warnings = " << s.warnings.size() << '\n';
  for (const Warning& w : s.warnings) out << "warning." << to_string(w.kind) << " = " << w.message << '\n';
  out.precision(old);
}

std::vector<ConvergenceRow> run_convergence(const RunConfig& config, std::span<const double> h_list,
                                            bool write_files, unsigned jobs) {
  std::vector<ConvergenceRow> rows(h_list.size());
  auto run_row = [&](std::size_t k) {
    ConvergenceRow& row = rows[k];
    row.h = h_list[k];
    RunConfig c = config;
    c.h = h_list[k];
    c.I.reset();
    c.tau.reset();
    c.T = 1.0;
    c.snapshot_times.clear();
    std::ostringstream name;
    name << "h_" << std::setprecision(6) << h_list[k];
    c.out_dir = (fs::path(config.out_dir) / name.str()).string();
    try {
      const RunSummary s = run_experiment(c, RunOptions{write_files, {}});
      row.I = s.mesh.I;
      row.tau = s.mesh.tau;
      row.Er = s.final_record().Er;
      row.Delta1 = s.final_record().Delta1;
      row.Delta2 = s.final_record().Delta2;
      row.ok = true;
      row.message = "ok";
    } catch (const std::exception& e) {
      row.ok = false;
      row.message = e.what();
    }
  };

  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(h_list.size())));
  if (jobs == 1) {
    for (std::size_t k = 0; k < rows.size(); ++k) run_row(k);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t) {
      pool.emplace_back([&] {
        for (std::size_t k = next++; k < rows.size(); k = next++) run_row(k);
      });
    }
    for (std::thread& t : pool) t.join();
  }

  if (write_files) {
    fs::create_directories(config.out_dir);
    std::ofstream csv = open_out(fs::path(config.out_dir) / "convergence.csv");
    write_convergence_csv(csv, rows);
    std::ofstream table = open_out(fs::path(config.out_dir) / "convergence_table.csv");
    write_convergence_table(table, rows);
  }
  return rows;
}

void write_convergence_csv(std::ostream& out, std::span<const ConvergenceRow> rows) {
  const auto old = out.precision(17);
  out << "h,I,tau,Er,Delta1,Delta2,status,message\n";
  for (const ConvergenceRow& r : rows) {
    out << r.h << ',' << r.I << ',' << r.tau << ',';
    if (r.Er) out << *r.Er;
    std::string msg = r.message;
    std::replace(msg.begin(), msg.end(), ',', ';');
    out << ',' << r.Delta1 << ',' << r.Delta2 << ',' << (r.ok ? "ok" : "failed") << ',' << msg
        << '\n';
  }
  out.precision(old);
}

void write_convergence_table(std::ostream& out, std::span<const ConvergenceRow> rows) {
  const auto old = out.precision(6);
  auto line = [&](const char* label, auto&& value) {
    out << label;
    for (const ConvergenceRow& r : rows) {
      out << ',';
      if (r.ok) value(r);
    }
    out << '\n';
  };
  line("h", [&](const ConvergenceRow& r) { out << r.h; });
  line("Er", [&](const ConvergenceRow& r) {
    if (r.Er) out << *r.Er;
  });
  line("Delta1", [&](const ConvergenceRow& r) { out << r.Delta1; });
  line("Delta2", [&](const ConvergenceRow& r) { out << r.Delta2; });
  out.precision(old);
}

void write_F_curve(std::ostream& out, double q, double r, double g_max, std::size_t n) {
  const auto old = out.precision(17);
  out << "# F(g, q) with q = " << q << ", r = " << r << "\n# g F\n";
  for (std::size_t k = 0; k <= n; ++k) {
    const double g = g_max * static_cast<double>(k) / static_cast<double>(n);
    out << g << ' ' << eval_F(g, q, r) << '\n';
  }
  out.precision(old);
}

ProfileEmission emit_profile(double A, const RunConfig& config, const std::string& out_dir) {
  ProfileEmission em;
  const fs::path dir(out_dir);
  fs::create_directories(dir);
  const Mesh mesh = config.mesh();
  const double eps = config.model.epsilon;

  if (config.model.is_mkdv()) {
    em.report.A = A;
    em.report.regime = AdmissibilityRegime::kNoInertia;
    em.report.admissible = A != 0.0;
    em.report.reason = A != 0.0 ? "exact sech soliton" : "amplitude must be non-zero";
    if (!em.report.admissible) throw NoSolutionError(em.report.reason);
    const TravelingWave wave = TravelingWave::mkdv(A, 0.5 * mesh.L, eps);
    {
      std::ofstream out = open_out(dir / "profile.dat");
      out.precision(17);
      out << "# A = " << A << "\n# V = " << A * A << "\n# beta = " << std::abs(A)
          << "\n# eta omega\n";
      const double step = 1e-2;
      for (double eta = 0.0; eta <= 30.0 + 1e-12; eta += step) {
        out << eta << ' ' << 1.0 / std::cosh(eta) << '\n';
      }
    }
    std::ofstream out = open_out(dir / "wave_x_u.dat");
    out.precision(17);
    out << "# t = 0\n# x u\n";
    for (std::size_t i = 0; i <= mesh.I; ++i) out << mesh.x(i) << ' ' << wave(mesh.x(i), 0.0) << '\n';
    em.files = {(dir / "profile.dat").string(), (dir / "wave_x_u.dat").string()};
    return em;
  }

  em.report = check_admissible(A, config.model);
  if (!em.report.admissible || !em.report.wave) {
    throw NoSolutionError("amplitude " + std::to_string(A) + " rejected: " + em.report.reason);
  }
  SolitonSpec spec = *em.report.wave;
  spec.x0 = 0.5 * mesh.L;
  ProfileTable table = integrate_profile(spec, default_eta_step(spec, mesh.h, eps));
  {
    std::ofstream out = open_out(dir / "profile.dat");
    write_profile(out, spec, table);
  }
  const TravelingWave wave = TravelingWave::from_profile(spec, table, eps);
  {
    std::ofstream out = open_out(dir / "wave_x_u.dat");
    out.precision(17);
    out << "# t = 0\n# x u\n";
    for (std::size_t i = 0; i <= mesh.I; ++i) out << mesh.x(i) << ' ' << wave(mesh.x(i), 0.0) << '\n';
  }
  const ProfileRoots roots = find_profile_roots(spec.q, spec.r);
  {
    std::ofstream out = open_out(dir / "F_curve.dat");
    write_F_curve(out, spec.q, spec.r, 1.2 * roots.g1);
  }
  {
    std::ofstream gp = open_out(dir / "plot_profile.gp");
    gp << "set terminal pngcairo size 900,600\nset output 'profile.png'\n"
          "set multiplot layout 1,2\nset xlabel 'g'\nset ylabel 'F'\n"
          "plot 'F_curve.dat' using 1:2 with lines title 'F(g,q)', 0 notitle\n"
          "set xlabel 'x'\nset ylabel 'u'\n"
          "plot 'wave_x_u.dat' using 1:2 with lines title 'u(x,0)'\nunset multiplot\n";
  }
  em.files = {(dir / "profile.dat").string(), (dir / "wave_x_u.dat").string(),
              (dir / "F_curve.dat").string(), (dir / "plot_profile.gp").string()};
  return em;
}

}  // namespace gmkdv
