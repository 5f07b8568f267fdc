// Command-line driver: profile, run, convergence, check.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "gmkdv/experiment.hpp"
#include "gmkdv/identity_checks.hpp"
#include "gmkdv/run_config.hpp"

namespace {

using namespace gmkdv;

struct CommonFlags {
  std::string config_path;
  std::string preset;
  std::optional<double> h;
  std::optional<double> tau;
  std::optional<double> T;
  std::string out;
  std::string snapshots;
  std::optional<int> max_iters;

  void add_to(CLI::App* app, bool with_run_flags) {
    // --h is the mesh step, so help is --help only.
    app->set_help_flag("--help", "print help and exit");
    app->add_option("--config", config_path, "key=value config file");
    app->add_option("--preset", preset, "mkdv-ex1 | mgdp-ex2 | mgdp-ex3 | mgdp-ex2-collision | "
                                        "mgdp-ex3-collision | custom");
    app->add_option("--h", h, "mesh step (overrides mesh.I)");
    app->add_option("--out", out, "output directory");
    if (!with_run_flags) return;
    app->add_option("--tau", tau, "explicit time step (default h^2)");
    app->add_option("--T", T, "final time");
    app->add_option("--snapshots", snapshots, "comma-separated snapshot times");
    app->add_option("--max-iters", max_iters, "linearisation iterations per step (debug)");
  }

  RunConfig resolve() const {
    RunConfig c;
    if (!config_path.empty()) {
      c = load_config(config_path);
      if (!preset.empty() && preset != c.preset) {
        throw ConfigError("--preset conflicts with the preset in " + config_path);
      }
    } else {
      c = preset_config(preset.empty() ? "mkdv-ex1" : preset);
    }
    if (h) {
      c.h = *h;
      c.I.reset();
    }
    if (tau) c.tau = *tau;
    if (T) c.T = *T;
    if (!out.empty()) c.out_dir = out;
    if (!snapshots.empty()) c.snapshot_times = parse_real_list(snapshots);
    if (max_iters) c.max_iters = *max_iters;
    return c;
  }
};

int cmd_profile(const CommonFlags& flags, std::optional<double> A, std::optional<double> q,
                double r) {
  RunConfig c = flags.resolve();
  if (q) {
    // F-curve only: roots and samples for a given (q, r).
    const ProfileRoots roots = find_profile_roots(*q, r);
    std::cout << std::setprecision(17) << "q = " << *q << "\nr = " << r
              << "\nC = " << profile_constant(*q, r) << "\ng0 = " << roots.g0
              << "\ng1 = " << roots.g1 << '\n';
    std::filesystem::create_directories(c.out_dir);
    const auto path = std::filesystem::path(c.out_dir) / "F_curve.dat";
    std::ofstream out(path);
    write_F_curve(out, *q, r, 1.2 * roots.g1);
    std::cout << "wrote " << path.string() << '\n';
    return 0;
  }
  const double amp = A ? *A : (c.waves.empty() ? 1.0 : c.waves.front().A);
  const ProfileEmission em = emit_profile(amp, c, c.out_dir);
  std::cout << std::setprecision(17) << "A = " << amp << "\nregime = " << to_string(em.report.regime)
            << "\nadmissible = yes\n";
  if (em.report.wave) {
    const SolitonSpec& w = *em.report.wave;
    std::cout << "V = " << w.V << "\nbeta = " << w.beta << "\nq = " << w.q << "\np = " << w.p
              << "\ng_star = " << w.g_star << '\n';
  }
  for (const std::string& f : em.files) std::cout << "wrote " << f << '\n';
  return 0;
}

int cmd_run(const CommonFlags& flags) {
  const RunConfig c = flags.resolve();
  const RunSummary s = run_experiment(c);
  write_summary(std::cout, s);
  std::cout << "output written to " << c.out_dir << '\n';
  return 0;
}

std::vector<double> default_h_list(const std::string& preset) {
  if (preset == "mgdp-ex3") {
    return {0.0062, 0.006, 0.0058, 0.0057, 0.0055, 0.0054, 0.0052, 0.0051, 0.005};
  }
  if (preset == "mgdp-ex2") {
    return {0.02, 0.0125, 0.01, 0.0071, 0.0055, 0.005, 0.0045, 0.0041, 0.0038};
  }
  return {0.02, 0.0125, 0.01, 0.0071, 0.0055, 0.005, 0.0045, 0.0041, 0.0038, 0.0033};
}

int cmd_convergence(const CommonFlags& flags, const std::string& h_list_text, unsigned jobs) {
  const RunConfig c = flags.resolve();
  const std::vector<double> hs =
      h_list_text.empty() ? default_h_list(c.preset) : parse_real_list(h_list_text);
  const std::vector<ConvergenceRow> rows = run_convergence(c, hs, true, jobs);
  write_convergence_csv(std::cout, rows);
  bool all_ok = true;
  for (const ConvergenceRow& r : rows) all_ok = all_ok && r.ok;
  return all_ok ? 0 : 1;
}

int cmd_check(std::size_t samples, std::size_t I) {
  const IdentitySuiteResult res = run_identity_suite(samples, I);
  print_identity_suite(std::cout, res);
  return res.all_passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-difference lab for the cubic general mKdV equation"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print help and exit");

  CommonFlags profile_flags, run_flags, conv_flags;
  std::optional<double> A, q;
  double r = 0.5;
  auto* profile = app.add_subcommand("profile", "soliton profile, (x, u) sample and F(g) curve");
  profile_flags.add_to(profile, false);
  profile->add_option("--A", A, "amplitude (default: first wave of the preset)");
  profile->add_option("--q", q, "only tabulate F(g, q) and its roots");
  profile->add_option("--r", r, "r for --q mode")->capture_default_str();

  auto* run = app.add_subcommand("run", "single time-stepping run");
  run_flags.add_to(run, true);

  std::string h_list;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  auto* conv = app.add_subcommand("convergence", "sweep over h with tau = h^2 to t = 1");
  conv_flags.add_to(conv, true);
  conv->add_option("--h-list", h_list, "comma-separated mesh steps");
  conv->add_option("--jobs", jobs, "rows run in parallel")->capture_default_str();

  std::size_t samples = 100, nodes = 256;
  auto* check = app.add_subcommand("check", "algebraic identity suite");
  check->add_option("--samples", samples)->capture_default_str();
  check->add_option("--I", nodes)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*profile) return cmd_profile(profile_flags, A, q, r);
    if (*run) return cmd_run(run_flags);
    if (*conv) return cmd_convergence(conv_flags, h_list, jobs);
    if (*check) return cmd_check(samples, nodes);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
