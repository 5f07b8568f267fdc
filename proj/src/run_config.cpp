#include "gmkdv/run_config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "gmkdv/errors.hpp"

namespace gmkdv {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double to_real(const std::string& key, const std::string& text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw ConfigError("key '" + key + "': '" + text + "' is not a number");
  }
  return v;
}

std::size_t to_count(const std::string& key, const std::string& text) {
  std::size_t v = 0;
  const char* first = text.data();
  const char* last = first + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw ConfigError("key '" + key + "': '" + text + "' is not a non-negative integer");
  }
  return v;
}

void apply_key(RunConfig& c, std::map<std::size_t, WaveConfig>& waves, const std::string& key,
               const std::string& value) {
  if (key == "model.alpha") c.model.alpha = to_real(key, value);
  else if (key == "model.gamma") c.model.gamma = to_real(key, value);
  else if (key == "model.c0") c.model.c0 = to_real(key, value);
  else if (key == "model.c1") c.model.c1 = to_real(key, value);
  else if (key == "model.c2") c.model.c2 = to_real(key, value);
  else if (key == "model.c3") c.model.c3 = to_real(key, value);
  else if (key == "model.epsilon" || key == "model.eps") c.model.epsilon = to_real(key, value);
  else if (key == "model.n") c.model.n = static_cast<int>(to_count(key, value));
  else if (key == "mesh.L") c.L = to_real(key, value);
  else if (key == "mesh.I") c.I = to_count(key, value);
  else if (key == "mesh.h") c.h = to_real(key, value);
  else if (key == "mesh.T") c.T = to_real(key, value);
  else if (key == "mesh.tau") {
    if (value == "h2" || value == "h^2") c.tau.reset();
    else c.tau = to_real(key, value);
  } else if (key == "output.dir") c.out_dir = value;
  else if (key == "output.snapshots") c.snapshot_times = parse_real_list(value);
  else if (key == "output.every") c.diag_every = to_count(key, value);
  else if (key == "debug.max_iters") c.max_iters = static_cast<int>(to_count(key, value));
  else if (key == "init.overlap_tol") c.overlap_tol = to_real(key, value);
  else if (key.rfind("wave.", 0) == 0) {
    // wave.<N>.A or wave.<N>.x0, N >= 1
    const auto dot = key.find('.', 5);
    if (dot == std::string::npos) throw ConfigError("malformed wave key '" + key + "'");
    const std::size_t idx = to_count(key, key.substr(5, dot - 5));
    if (idx == 0) throw ConfigError("wave indices start at 1: '" + key + "'");
    const std::string field = key.substr(dot + 1);
    if (field == "A") waves[idx].A = to_real(key, value);
    else if (field == "x0") waves[idx].x0 = to_real(key, value);
    else throw ConfigError("unknown wave field '" + key + "'");
  } else {
    throw ConfigError("unknown key '" + key + "'");
  }
}

}  // namespace

Mesh RunConfig::mesh() const {
  if (I) return Mesh::from_nodes(L, *I, T, tau);
  if (h) return Mesh::from_step(L, *h, T, tau);
  throw ConfigError("mesh needs mesh.I or mesh.h");
}

void RunConfig::validate() const {
  model.validate();
  if (!(L > 0.0) || !(T > 0.0)) throw ConfigError("mesh.L and mesh.T must be positive");
  if (tau && !(*tau > 0.0)) throw ConfigError("mesh.tau must be positive");
  if (h && !(*h > 0.0)) throw ConfigError("mesh.h must be positive");
  if (max_iters < 1) throw ConfigError("debug.max_iters must be at least 1");
  (void)mesh();
  for (const WaveConfig& w : waves) {
    if (w.A == 0.0) throw ConfigError("wave amplitude must be non-zero");
    if (!(w.x0 > 0.0 && w.x0 < L)) throw ConfigError("wave peak must lie inside (0, L)");
  }
  for (double t : snapshot_times) {
    if (!(t >= 0.0 && t <= T)) throw ConfigError("snapshot times must lie in [0, T]");
  }
}

std::vector<std::string> preset_names() {
  return {"mkdv-ex1", "mgdp-ex2", "mgdp-ex3", "mgdp-ex2-collision", "mgdp-ex3-collision", "custom"};
}

RunConfig preset_config(std::string_view name) {
  RunConfig c;
  c.preset = std::string(name);
  if (name == "mkdv-ex1") {
    c.model = mkdv_params();
    c.L = 20.0;
    c.h = 0.0041;
    c.waves = {{1.2, 10.0}};
  } else if (name == "mgdp-ex2") {
    c.model = mgdp_example2_params();
    c.L = 20.0;
    c.h = 0.0045;
    c.waves = {{1.2, 8.0}};
  } else if (name == "mgdp-ex3") {
    c.model = mgdp_example3_params();
    c.L = 20.0;
    c.h = 0.0052;
    c.waves = {{1.5, 7.5}};
  } else if (name == "mgdp-ex2-collision") {
    // Faster wave behind. The gap of 14.5 keeps the initial overlap under
    // 1e-8; the pair meets near t = 29 and has separated again by T.
    c.model = mgdp_example2_params();
    c.L = 85.0;
    c.h = 0.0125;
    c.T = 40.0;
    c.waves = {{1.2, 7.5}, {0.5, 22.0}};
  } else if (name == "mgdp-ex3-collision") {
    // The antisoliton tail is long (decay rate ~1.75 per unit x), hence the
    // gap of 15; the soliton passes it near t = 8.
    c.model = mgdp_example3_params();
    c.L = 70.0;
    c.h = 0.0125;
    c.T = 15.0;
    c.waves = {{1.8, 6.0}, {-0.5, 21.0}};
  } else if (name == "custom") {
    c.h = 0.01;
  } else {
    throw ConfigError("unknown preset '" + std::string(name) + "'");
  }
  return c;
}

RunConfig parse_config(std::istream& in) {
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  std::size_t lineno = 0;
  std::optional<std::string> preset;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key=value");
    }
    std::string key = trim(std::string_view(body).substr(0, eq));
    std::string value = trim(std::string_view(body).substr(eq + 1));
    if (key == "preset") preset = value;
    else entries.emplace_back(std::move(key), std::move(value));
  }

  RunConfig c = preset_config(preset.value_or("custom"));
  std::map<std::size_t, WaveConfig> waves;
  for (std::size_t k = 0; k < c.waves.size(); ++k) waves[k + 1] = c.waves[k];
  bool explicit_waves = false;
  for (const auto& [key, value] : entries) {
    if (key.rfind("wave.", 0) == 0 && !explicit_waves) {
      // Listing any wave replaces the preset's wave list.
      waves.clear();
      explicit_waves = true;
    }
    apply_key(c, waves, key, value);
  }
  if (c.I && c.h) c.h.reset();
  c.waves.clear();
  for (const auto& [idx, w] : waves) c.waves.push_back(w);
  if (preset && *preset != "custom") {
    // Any model change turns a preset into a custom run.
    if (!(c.model == preset_config(*preset).model)) c.preset = "custom";
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in);
}

void write_config(std::ostream& out, const RunConfig& c) {
  const auto old = out.precision(17);
  out << "preset=" << c.preset << '\n'
      << "model.alpha=" << c.model.alpha << '\n'
      << "model.gamma=" << c.model.gamma << '\n'
      << "model.c0=" << c.model.c0 << '\n'
      << "model.c1=" << c.model.c1 << '\n'
      << "model.c2=" << c.model.c2 << '\n'
      << "model.c3=" << c.model.c3 << '\n'
      << "model.epsilon=" << c.model.epsilon << '\n'
      << "model.n=" << c.model.n << '\n'
      << "mesh.L=" << c.L << '\n';
  if (c.I) out << "mesh.I=" << *c.I << '\n';
  if (c.h) out << "mesh.h=" << *c.h << '\n';
  out << "mesh.T=" << c.T << '\n';
  if (c.tau) out << "mesh.tau=" << *c.tau << '\n';
  else out << "mesh.tau=h2\n";
  for (std::size_t k = 0; k < c.waves.size(); ++k) {
    out << "wave." << k + 1 << ".A=" << c.waves[k].A << '\n'
        << "wave." << k + 1 << ".x0=" << c.waves[k].x0 << '\n';
  }
  out << "output.dir=" << c.out_dir << '\n';
  if (!c.snapshot_times.empty()) {
    out << "output.snapshots=";
    for (std::size_t k = 0; k < c.snapshot_times.size(); ++k) {
      out << (k ? "," : "") << c.snapshot_times[k];
    }
    out << '\n';
  }
  out << "output.every=" << c.diag_every << '\n'
      << "debug.max_iters=" << c.max_iters << '\n'
      << "init.overlap_tol=" << c.overlap_tol << '\n';
  out.precision(old);
}

std::vector<double> parse_real_list(std::string_view text) {
  std::vector<double> out;
  std::string item;
  std::istringstream ss{std::string(text)};
  while (std::getline(ss, item, ',')) {
    const std::string t = trim(item);
    if (t.empty()) continue;
    out.push_back(to_real("list", t));
  }
  return out;
}

}  // namespace gmkdv
