#include "darkgate/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#ifndef DARKGATE_PRESET_DIR
#define DARKGATE_PRESET_DIR "presets"
#endif

namespace darkgate {
namespace {

std::string fmt(double v) {
  if (std::isinf(v)) return "inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(std::string_view text, const std::string& key, bool allow_inf = false) {
  const std::string s(text);
  if (allow_inf && (s == "inf" || s == "infinity")) return std::numeric_limits<double>::infinity();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v))
    throw ConfigError("key '" + key + "': '" + s + "' is not a finite number");
  return v;
}

int to_int(std::string_view text, const std::string& key) {
  const double v = to_double(text, key);
  if (v != std::floor(v) || std::abs(v) > 1e9) throw ConfigError("key '" + key + "': expected an integer");
  return static_cast<int>(v);
}

struct Field {
  const char* name;
  bool required;
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

Field number(const char* name, bool required, double RunConfig::*member, bool allow_inf = false) {
  return {name, required,
          [=](RunConfig& c, std::string_view v) { c.*member = to_double(v, name, allow_inf); },
          [=](const RunConfig& c) { return fmt(c.*member); }};
}

Field integer(const char* name, int RunConfig::*member) {
  return {name, false, [=](RunConfig& c, std::string_view v) { c.*member = to_int(v, name); },
          [=](const RunConfig& c) { return std::to_string(c.*member); }};
}

Field optional_number(const char* name, std::optional<double> RunConfig::*member) {
  return {name, false, [=](RunConfig& c, std::string_view v) { c.*member = to_double(v, name); },
          [=](const RunConfig& c) { return (c.*member) ? fmt(*(c.*member)) : std::string("default"); }};
}

Field text(const char* name, std::string RunConfig::*member) {
  return {name, false, [=](RunConfig& c, std::string_view v) { c.*member = std::string(v); },
          [=](const RunConfig& c) { return c.*member; }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> all = [] {
    std::vector<Field> f;
    f.push_back(number("omega_a_hz", true, &RunConfig::omega_a_hz));
    f.push_back(number("omega_b_hz", true, &RunConfig::omega_b_hz));
    f.push_back(number("omega_f_hz", true, &RunConfig::omega_f_hz));
    f.push_back(number("omega1_ge_hz", true, &RunConfig::omega1_ge_hz));
    f.push_back(number("omega1_es_hz", true, &RunConfig::omega1_es_hz));
    f.push_back(number("omega2_ge_hz", true, &RunConfig::omega2_ge_hz));
    f.push_back(number("omega2_es_hz", true, &RunConfig::omega2_es_hz));
    f.push_back(number("g1_ge_hz", true, &RunConfig::g1_ge_hz));
    f.push_back(number("g2_ge_hz", true, &RunConfig::g2_ge_hz));
    f.push_back(number("gf_a_hz", true, &RunConfig::gf_a_hz));
    f.push_back(number("gf_b_hz", true, &RunConfig::gf_b_hz));
    f.push_back(number("kappa_a_lifetime_s", true, &RunConfig::kappa_a_lifetime_s, true));
    f.push_back(number("kappa_b_lifetime_s", true, &RunConfig::kappa_b_lifetime_s, true));
    f.push_back(number("kappa_f_lifetime_s", true, &RunConfig::kappa_f_lifetime_s, true));
    f.push_back(number("gamma1_ge_lifetime_s", true, &RunConfig::gamma1_ge_lifetime_s, true));
    f.push_back(number("gamma2_ge_lifetime_s", true, &RunConfig::gamma2_ge_lifetime_s, true));
    f.push_back(integer("n_max", &RunConfig::n_max));
    f.push_back(number("dt_s", false, &RunConfig::dt_s));
    f.push_back(integer("output_points", &RunConfig::output_points));
    f.push_back(integer("grid_n", &RunConfig::grid_n));
    f.push_back(number("t_final_s", false, &RunConfig::t_final_s));
    f.push_back({"fig3_deltas", false,
                 [](RunConfig& c, std::string_view v) {
                   c.fig3_deltas.clear();
                   std::size_t pos = 0;
                   while (pos <= v.size()) {
                     const auto comma = v.find(',', pos);
                     const auto item = trim(v.substr(pos, comma == std::string_view::npos ? v.npos : comma - pos));
                     c.fig3_deltas.push_back(to_double(item, "fig3_deltas"));
                     if (comma == std::string_view::npos) break;
                     pos = comma + 1;
                   }
                 },
                 [](const RunConfig& c) {
                   std::string s;
                   for (double d : c.fig3_deltas) s += (s.empty() ? "" : ",") + fmt(d);
                   return s;
                 }});
    f.push_back(number("fig3_gt_min", false, &RunConfig::fig3_gt_min));
    f.push_back(number("fig3_gt_max", false, &RunConfig::fig3_gt_max));
    f.push_back(integer("fig3_gt_points", &RunConfig::fig3_gt_points));
    f.push_back(optional_number("fig7_axis_min", &RunConfig::fig7_axis_min));
    f.push_back(optional_number("fig7_axis_max", &RunConfig::fig7_axis_max));
    f.push_back(integer("fig7_axis_points", &RunConfig::fig7_axis_points));
    f.push_back(number("sweep_from_hz", false, &RunConfig::sweep_from_hz));
    f.push_back(number("sweep_to_hz", false, &RunConfig::sweep_to_hz));
    f.push_back(number("sweep_step_hz", false, &RunConfig::sweep_step_hz));
    f.push_back(text("experiment", &RunConfig::experiment));
    f.push_back(text("out_dir", &RunConfig::out_dir));
    return f;
  }();
  return all;
}

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw ConfigError("key '" + key + "': " + what);
}

double rate_of(double lifetime) { return std::isinf(lifetime) ? 0.0 : 1.0 / lifetime; }

}  // namespace

void RunConfig::validate() const {
  const std::pair<const char*, double> freqs[] = {
      {"omega_a_hz", omega_a_hz},     {"omega_b_hz", omega_b_hz},     {"omega_f_hz", omega_f_hz},
      {"omega1_ge_hz", omega1_ge_hz}, {"omega1_es_hz", omega1_es_hz}, {"omega2_ge_hz", omega2_ge_hz},
      {"omega2_es_hz", omega2_es_hz}};
  for (const auto& [k, v] : freqs) require(std::isfinite(v) && v > 0.0 && v <= 1e12, k, "must be in (0, 1e12] Hz");
  const std::pair<const char*, double> couplings[] = {
      {"g1_ge_hz", g1_ge_hz}, {"g2_ge_hz", g2_ge_hz}, {"gf_a_hz", gf_a_hz}, {"gf_b_hz", gf_b_hz}};
  for (const auto& [k, v] : couplings) require(std::isfinite(v) && v >= 0.0 && v <= 1e11, k, "must be in [0, 1e11] Hz");
  const std::pair<const char*, double> lifetimes[] = {{"kappa_a_lifetime_s", kappa_a_lifetime_s},
                                                      {"kappa_b_lifetime_s", kappa_b_lifetime_s},
                                                      {"kappa_f_lifetime_s", kappa_f_lifetime_s},
                                                      {"gamma1_ge_lifetime_s", gamma1_ge_lifetime_s},
                                                      {"gamma2_ge_lifetime_s", gamma2_ge_lifetime_s}};
  for (const auto& [k, v] : lifetimes) require(v > 0.0, k, "must be > 0 s or inf");

  require(n_max >= 1 && n_max <= 5, "n_max", "must be in [1, 5]");
  require(std::isfinite(dt_s) && dt_s >= 0.0, "dt_s", "must be >= 0 (0 selects automatically)");
  require(output_points >= 2 && output_points <= 1000000, "output_points", "must be in [2, 1e6]");
  require(grid_n >= 4 && grid_n <= 1024, "grid_n", "must be in [4, 1024]");
  require(std::isfinite(t_final_s) && t_final_s >= 0.0, "t_final_s", "must be >= 0");
  require(!fig3_deltas.empty(), "fig3_deltas", "needs at least one value");
  for (double d : fig3_deltas) require(d > 1.0, "fig3_deltas", "every Delta must exceed 1");
  require(fig3_gt_min >= 0.0, "fig3_gt_min", "must be >= 0");
  require(fig3_gt_max > fig3_gt_min, "fig3_gt_max", "must exceed fig3_gt_min");
  require(fig3_gt_points >= 2, "fig3_gt_points", "must be >= 2");
  require(fig7_axis_points >= 0, "fig7_axis_points", "must be >= 0");
  if (fig7_axis_points > 0)
    require(fig7_axis_min.has_value() && fig7_axis_max.has_value(), "fig7_axis_points",
            "needs fig7_axis_min and fig7_axis_max");
  if (fig7_axis_min && fig7_axis_max)
    require(*fig7_axis_max >= *fig7_axis_min, "fig7_axis_max", "must be >= fig7_axis_min");
  require(sweep_from_hz > 0.0, "sweep_from_hz", "must be > 0");
  require(sweep_to_hz >= sweep_from_hz, "sweep_to_hz", "must be >= sweep_from_hz");
  require(sweep_step_hz > 0.0, "sweep_step_hz", "must be > 0");
  require(!out_dir.empty(), "out_dir", "must not be empty");
}

std::string RunConfig::canonical_echo() const {
  std::map<std::string, std::string> sorted;
  for (const auto& f : fields()) sorted[f.name] = f.get(*this);
  std::string out;
  for (const auto& [k, v] : sorted) out += k + " = " + v + "\n";
  return out;
}

RunConfig parse_config(std::string_view text_in, const std::string& origin) {
  RunConfig cfg;
  cfg.source = origin;
  std::set<std::string> seen;
  std::size_t line_no = 0, pos = 0;
  while (pos <= text_in.size()) {
    const auto nl = text_in.find('\n', pos);
    std::string_view line = text_in.substr(pos, nl == std::string_view::npos ? text_in.npos : nl - pos);
    pos = nl == std::string_view::npos ? text_in.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = origin + ":" + std::to_string(line_no);
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where + ": parse error, expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    const auto it = std::find_if(fields().begin(), fields().end(), [&](const Field& f) { return key == f.name; });
    if (it == fields().end()) throw ConfigError(where + ": unknown key '" + key + "'");
    if (!seen.insert(key).second) throw ConfigError(where + ": duplicate key '" + key + "'");
    if (value.empty()) throw ConfigError(where + ": key '" + key + "' has no value");
    try {
      it->set(cfg, value);
    } catch (const ConfigError& e) {
      throw ConfigError(where + ": " + e.what());
    }
  }
  for (const auto& f : fields())
    if (f.required && !seen.count(f.name)) throw ConfigError(origin + ": missing required key '" + f.name + "'");
  cfg.validate();
  return cfg;
}

std::string preset_directory() {
  if (const char* env = std::getenv("DARKGATE_PRESET_DIR")) return env;
  return DARKGATE_PRESET_DIR;
}

RunConfig load_config(const std::string& path_or_preset) {
  namespace fs = std::filesystem;
  fs::path path(path_or_preset);
  if (!fs::exists(path)) {
    const fs::path preset = fs::path(preset_directory()) / (path_or_preset + ".cfg");
    if (fs::exists(preset)) path = preset;
  }
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path_or_preset + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string());
}

DeviceParams to_device_params(const RunConfig& cfg) {
  DeviceParams p;
  p.omega_a = kTwoPi * cfg.omega_a_hz;
  p.omega_b = kTwoPi * cfg.omega_b_hz;
  p.omega_f = kTwoPi * cfg.omega_f_hz;
  p.omega1_ge = kTwoPi * cfg.omega1_ge_hz;
  p.omega1_es = kTwoPi * cfg.omega1_es_hz;
  p.omega2_ge = kTwoPi * cfg.omega2_ge_hz;
  p.omega2_es = kTwoPi * cfg.omega2_es_hz;
  p.g1_ge = kTwoPi * cfg.g1_ge_hz;
  p.g2_ge = kTwoPi * cfg.g2_ge_hz;
  p.gf_a = kTwoPi * cfg.gf_a_hz;
  p.gf_b = kTwoPi * cfg.gf_b_hz;
  p.kappa_a = rate_of(cfg.kappa_a_lifetime_s);
  p.kappa_b = rate_of(cfg.kappa_b_lifetime_s);
  p.kappa_f = rate_of(cfg.kappa_f_lifetime_s);
  p.gamma1_ge = rate_of(cfg.gamma1_ge_lifetime_s);
  p.gamma2_ge = rate_of(cfg.gamma2_ge_lifetime_s);
  p.validate();
  return p;
}

SimulationControls to_controls(const RunConfig& cfg) {
  SimulationControls c;
  c.n_max = cfg.n_max;
  c.dt = cfg.dt_s;
  c.output_points = cfg.output_points;
  c.grid_n = cfg.grid_n;
  return c;
}

}  // namespace darkgate
