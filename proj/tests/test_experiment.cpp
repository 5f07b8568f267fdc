#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "gmkdv/errors.hpp"
#include "gmkdv/experiment.hpp"
#include "gmkdv/run_config.hpp"

using namespace gmkdv;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("gmkdv_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::map<std::string, std::string> summary_map(const fs::path& p) {
  std::map<std::string, std::string> out;
  std::ifstream in(p);
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find(" = ");
    if (eq != std::string::npos) out[line.substr(0, eq)] = line.substr(eq + 3);
  }
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(s);
  while (std::getline(ss, item, sep)) out.push_back(item);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::string last_line(const std::string& text) {
  std::istringstream is(text);
  std::string line, last;
  while (std::getline(is, line)) {
    if (!line.empty()) last = line;
  }
  return last;
}

RunConfig small_ex2(const fs::path& dir) {
  RunConfig c = preset_config("mgdp-ex2");
  c.h = 0.02;
  c.T = 0.1;
  c.out_dir = dir.string();
  return c;
}

}  // namespace

TEST(Presets, CoefficientSets) {
  const RunConfig e1 = preset_config("mkdv-ex1");
  EXPECT_TRUE(e1.model.is_mkdv());
  EXPECT_EQ(e1.model.alpha, 0.0);
  EXPECT_EQ(e1.model.c1, 2.0);
  EXPECT_EQ(e1.model.gamma, 1.0);
  EXPECT_EQ(e1.model.epsilon, 0.1);
  ASSERT_EQ(e1.waves.size(), 1u);
  EXPECT_EQ(e1.waves[0].A, 1.2);

  const RunConfig e2 = preset_config("mgdp-ex2");
  EXPECT_EQ(e2.model, mgdp_example2_params());
  EXPECT_EQ(e2.model.c2, 2.0);
  EXPECT_EQ(e2.model.c3, 2.0);
  EXPECT_EQ(e2.model.gamma, 2.0);

  const RunConfig e3 = preset_config("mgdp-ex3");
  EXPECT_EQ(e3.model.alpha, 1.0);
  EXPECT_EQ(e3.model.c1, 1.0);
  EXPECT_EQ(e3.model.c2, 1.0);
  EXPECT_EQ(e3.model.c3, 1.0);

  for (const std::string& n : preset_names()) EXPECT_NO_THROW(preset_config(n).validate()) << n;
  EXPECT_THROW(preset_config("nope"), ConfigError);
}

TEST(Presets, CollisionGeometryFitsTheDomain) {
  // Every preset must build its waves and pass the init checks without an
  // overlap warning.
  for (const char* name : {"mgdp-ex2-collision", "mgdp-ex3-collision"}) {
    const RunConfig c = preset_config(name);
    ASSERT_EQ(c.waves.size(), 2u);
    const Mesh m = c.mesh();
    const std::vector<TravelingWave> w = build_waves(c, m);
    const InitResult r = init_state(w, m, c.model, c.overlap_tol);
    EXPECT_TRUE(r.warnings.empty()) << name;
    // Faster wave behind the slower one.
    EXPECT_LT(c.waves[0].x0, c.waves[1].x0);
    EXPECT_GT(w[0].velocity(), w[1].velocity());
    // Both still inside at T.
    for (const TravelingWave& v : w) EXPECT_LT(v.center(c.T) + 5.0, c.L) << name;
  }
}

TEST(ConfigParse, KeysCommentsAndPrecedence) {
  std::istringstream in(R"(# comment
preset = mgdp-ex2
mesh.L = 12    # trailing comment
mesh.h = 0.01
mesh.I = 600
mesh.T = 0.5
mesh.tau = 1e-5
wave.2.A = 0.5
wave.2.x0 = 9
wave.1.A = 1.2
wave.1.x0 = 3
output.dir = somewhere
output.snapshots = 0, 0.25,0.5
output.every = 7
debug.max_iters = 3
)");
  const RunConfig c = parse_config(in);
  EXPECT_EQ(c.preset, "mgdp-ex2");
  EXPECT_EQ(c.L, 12.0);
  ASSERT_TRUE(c.I);
  EXPECT_EQ(*c.I, 600u);
  EXPECT_FALSE(c.h);  // I wins
  EXPECT_EQ(c.T, 0.5);
  ASSERT_TRUE(c.tau);
  EXPECT_EQ(*c.tau, 1e-5);
  ASSERT_EQ(c.waves.size(), 2u);
  EXPECT_EQ(c.waves[0].x0, 3.0);
  EXPECT_EQ(c.waves[1].A, 0.5);
  EXPECT_EQ(c.out_dir, "somewhere");
  EXPECT_EQ(c.snapshot_times, (std::vector<double>{0.0, 0.25, 0.5}));
  EXPECT_EQ(c.diag_every, 7u);
  EXPECT_EQ(c.max_iters, 3);
}

TEST(ConfigParse, PresetWavesKeptUnlessListed) {
  std::istringstream in("preset=mgdp-ex3\nmesh.T=0.2\n");
  const RunConfig c = parse_config(in);
  ASSERT_EQ(c.waves.size(), 1u);
  EXPECT_EQ(c.waves[0].A, preset_config("mgdp-ex3").waves[0].A);
}

TEST(ConfigParse, ModelChangeMakesCustom) {
  std::istringstream in("preset=mgdp-ex2\nmodel.gamma=3\n");
  EXPECT_EQ(parse_config(in).preset, "custom");
}

TEST(ConfigParse, TauH2Keyword) {
  std::istringstream in("mesh.tau=h2\nmesh.h=0.05\n");
  EXPECT_FALSE(parse_config(in).tau);
}

TEST(ConfigParse, Errors) {
  for (const char* text : {"nonsense\n", "mesh.h=abc\n", "mesh.Q=1\n", "wave.0.A=1\n", "wave.1.B=1\n",
                           "wave.x=1\n", "mesh.I=-4\n", "preset=unknown\n"}) {
    std::istringstream in(text);
    EXPECT_THROW(parse_config(in), ConfigError) << text;
  }
  EXPECT_THROW(load_config("/nonexistent/cfg.txt"), ConfigError);
}

TEST(ConfigValidate, RejectsInconsistentRuns) {
  RunConfig c = preset_config("mgdp-ex2");
  c.waves = {{0.0, 5.0}};
  EXPECT_THROW(c.validate(), ConfigError);
  c = preset_config("mgdp-ex2");
  c.waves = {{1.2, 25.0}};
  EXPECT_THROW(c.validate(), ConfigError);
  c = preset_config("mgdp-ex2");
  c.snapshot_times = {2.0};
  EXPECT_THROW(c.validate(), ConfigError);
  c = preset_config("custom");
  c.h.reset();
  EXPECT_THROW(c.validate(), ConfigError);
  c = preset_config("mgdp-ex2");
  c.model.c2 = -1.0;
  EXPECT_THROW(c.validate(), DomainError);
}

TEST(ConfigWrite, RoundTrips) {
  RunConfig c = preset_config("mgdp-ex3-collision");
  c.tau = 1.0 / 3.0e4;
  c.snapshot_times = {0.1, 1.0 / 3.0};
  c.diag_every = 11;
  c.max_iters = 3;
  c.overlap_tol = 2e-9;
  c.out_dir = "a/b";
  std::ostringstream os;
  write_config(os, c);
  std::istringstream in(os.str());
  const RunConfig d = parse_config(in);
  EXPECT_EQ(d.preset, c.preset);
  EXPECT_EQ(d.model, c.model);
  EXPECT_EQ(d.L, c.L);
  EXPECT_EQ(d.h, c.h);
  EXPECT_EQ(d.I, c.I);
  EXPECT_EQ(d.T, c.T);
  EXPECT_EQ(d.tau, c.tau);
  ASSERT_EQ(d.waves.size(), c.waves.size());
  for (std::size_t k = 0; k < c.waves.size(); ++k) {
    EXPECT_EQ(d.waves[k].A, c.waves[k].A);
    EXPECT_EQ(d.waves[k].x0, c.waves[k].x0);
  }
  EXPECT_EQ(d.snapshot_times, c.snapshot_times);
  EXPECT_EQ(d.diag_every, c.diag_every);
  EXPECT_EQ(d.max_iters, c.max_iters);
  EXPECT_EQ(d.overlap_tol, c.overlap_tol);
  EXPECT_EQ(d.out_dir, c.out_dir);
}

TEST(FindPeaks, RefinesParabola) {
  const Mesh m = Mesh::from_nodes(10.0, 100, 1.0);
  std::vector<double> y(101, 0.0);
  for (std::size_t i = 0; i <= 100; ++i) {
    const double x = m.x(i);
    // A positive and a negative parabolic cap; three-point refinement is exact.
    y[i] = std::max(0.0, 1.0 - 4.0 * (x - 3.03) * (x - 3.03)) +
           std::min(0.0, -0.6 + 4.0 * (x - 7.0) * (x - 7.0));
  }
  const std::vector<Peak> p = find_peaks(y, m, 0.3);
  ASSERT_EQ(p.size(), 2u);
  EXPECT_NEAR(p[0].x, 3.03, 1e-12);
  EXPECT_NEAR(p[0].value, 1.0, 1e-12);
  EXPECT_NEAR(p[1].x, 7.0, 1e-12);
  EXPECT_NEAR(p[1].value, -0.6, 1e-12);
}

TEST(BuildWaves, InadmissibleAmplitudeRejected) {
  RunConfig c = preset_config("mgdp-ex2");
  c.waves = {{0.1, 8.0}};
  EXPECT_THROW(build_waves(c, c.mesh()), NoSolutionError);
}

TEST(RunExperiment, EmptyWaveListStaysZero) {
  RunConfig c = preset_config("custom");
  c.h = 0.05;
  c.T = 0.1;
  const RunSummary s = run_experiment(c, {.write_files = false});
  EXPECT_EQ(s.final_record().Delta1, 0.0);
  EXPECT_EQ(s.final_record().Delta2, 0.0);
  EXPECT_EQ(s.final_record().E2, 0.0);
  EXPECT_TRUE(s.peaks.empty());
}

TEST(RunExperiment, DeterministicAndSummaryMatchesCsv) {
  const fs::path d1 = scratch_dir("det1"), d2 = scratch_dir("det2");
  RunConfig c = small_ex2(d1);
  c.snapshot_times = {0.0, 0.05};
  const RunSummary s = run_experiment(c);
  c.out_dir = d2.string();
  (void)run_experiment(c);
  for (const char* f : {"diagnostics.csv", "peaks.csv", "snapshot_t0.000000.dat", "snapshot_t0.050000.dat"}) {
    ASSERT_TRUE(fs::exists(d1 / f)) << f;
    EXPECT_EQ(slurp(d1 / f), slurp(d2 / f)) << f;
  }
  EXPECT_TRUE(fs::exists(d1 / "plot_diagnostics.gp"));
  EXPECT_TRUE(fs::exists(d1 / "plot_snapshots.gp"));
  EXPECT_TRUE(fs::exists(d1 / "config.txt"));

  // Summary values equal the last CSV row to the last bit.
  const std::vector<std::string> row = split(last_line(slurp(d1 / "diagnostics.csv")), ',');
  ASSERT_EQ(row.size(), 7u);
  const auto sum = summary_map(d1 / "summary.txt");
  EXPECT_EQ(std::stod(sum.at("Delta1")), std::stod(row[3]));
  EXPECT_EQ(std::stod(sum.at("Delta2")), std::stod(row[4]));
  EXPECT_EQ(std::stod(row[3]), s.final_record().Delta1);
  EXPECT_EQ(std::stod(row[4]), s.final_record().Delta2);
  EXPECT_EQ(row[5], "");
  EXPECT_NEAR(std::stod(row[0]), c.T, 1e-12);

  // Snapshot header then (x, u) rows.
  std::ifstream snap(d1 / "snapshot_t0.050000.dat");
  std::string line;
  std::getline(snap, line);
  EXPECT_EQ(line[0], '#');
}

TEST(RunExperiment, Example3AntisolitonReportsProfileRoot) {
  RunConfig c = preset_config("mgdp-ex3");
  c.waves = {{-1.8, 7.0}};
  c.h = 0.01;
  c.T = 0.05;
  const RunSummary s = run_experiment(c, {.write_files = false});
  ASSERT_EQ(s.wave_specs.size(), 1u);
  EXPECT_NEAR(s.wave_specs[0].g_star, 1.73473808, 1e-6);
  ASSERT_TRUE(s.max_amplitude_deviation);
  EXPECT_LT(*s.max_amplitude_deviation, 0.02);
}

TEST(RunExperiment, ObserverSeesEveryStep) {
  RunConfig c = small_ex2(scratch_dir("obs"));
  std::size_t calls = 0, last = 0;
  RunOptions o;
  o.write_files = false;
  o.observer = [&](std::size_t j, const Stepper& st) {
    ++calls;
    last = j;
    EXPECT_EQ(st.last_report().increments.size(), 2u);
  };
  const RunSummary s = run_experiment(c, o);
  EXPECT_EQ(calls, s.steps);
  EXPECT_EQ(last, s.mesh.J);
}

TEST(Convergence, RowsAreIndependentOfTheSweep) {
  RunConfig c = preset_config("mkdv-ex1");
  c.out_dir = scratch_dir("conv").string();
  const std::vector<double> hs{0.05, 0.04};
  const std::vector<ConvergenceRow> rows = run_convergence(c, hs, true, 2);
  ASSERT_EQ(rows.size(), 2u);
  for (const ConvergenceRow& r : rows) EXPECT_TRUE(r.ok) << r.message;
  const std::vector<ConvergenceRow> single = run_convergence(c, std::vector<double>{0.04}, false, 1);
  EXPECT_EQ(single[0].Delta1, rows[1].Delta1);
  EXPECT_EQ(single[0].Delta2, rows[1].Delta2);
  ASSERT_TRUE(single[0].Er && rows[1].Er);
  EXPECT_EQ(*single[0].Er, *rows[1].Er);
  EXPECT_TRUE(fs::exists(fs::path(c.out_dir) / "convergence.csv"));
  EXPECT_TRUE(fs::exists(fs::path(c.out_dir) / "convergence_table.csv"));
}

TEST(Convergence, FailingRowDoesNotStopTheSweep) {
  RunConfig c = preset_config("mkdv-ex1");
  const std::vector<double> hs{2.0, 0.05};  // the first leaves fewer than 16 nodes
  const std::vector<ConvergenceRow> rows = run_convergence(c, hs, false, 1);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_FALSE(rows[0].ok);
  EXPECT_FALSE(rows[0].message.empty());
  EXPECT_TRUE(rows[1].ok);
  std::ostringstream os;
  write_convergence_csv(os, rows);
  EXPECT_NE(os.str().find("h,I,tau,Er,Delta1,Delta2,status,message"), std::string::npos);
}

TEST(EmitProfile, WritesFilesWithExactPeakRow) {
  const fs::path dir = scratch_dir("profile");
  const ProfileEmission em = emit_profile(1.2, preset_config("mgdp-ex2"), dir.string());
  EXPECT_TRUE(em.report.admissible);
  ASSERT_GE(em.files.size(), 3u);
  for (const std::string& f : em.files) EXPECT_TRUE(fs::exists(f)) << f;
  std::ifstream in(dir / "profile.dat");
  std::string line;
  while (std::getline(in, line) && line[0] == '#') {
  }
  std::istringstream row(line);
  double eta = -1, omega = -1;
  row >> eta >> omega;
  EXPECT_EQ(eta, 0.0);
  EXPECT_EQ(omega, 1.0);
}

TEST(EmitProfile, InadmissibleAmplitude) {
  EXPECT_THROW(emit_profile(0.1, preset_config("mgdp-ex2"), scratch_dir("bad").string()),
               NoSolutionError);
}

TEST(FCurve, SamplesCrossZeroAtTheSolitonRoot) {
  std::ostringstream os;
  write_F_curve(os, 0.148, 0.5, 3.0, 600);
  std::istringstream is(os.str());
  std::vector<std::pair<double, double>> pts;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream r(line);
    double g, F;
    r >> g >> F;
    pts.emplace_back(g, F);
  }
  ASSERT_EQ(pts.size(), 601u);
  EXPECT_EQ(pts.front().first, 0.0);
  EXPECT_NEAR(pts.back().first, 3.0, 1e-15);
  // Sign change bracketing g0 ~ 0.175.
  bool found = false;
  for (std::size_t k = 1; k < pts.size(); ++k) {
    if (pts[k - 1].second < 0 && pts[k].second >= 0) {
      EXPECT_NEAR(pts[k].first, 0.175, 0.006);
      found = true;
      break;
    }
  }
  EXPECT_TRUE(found);
}
