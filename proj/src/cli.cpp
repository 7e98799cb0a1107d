#include "darkgate/cli.hpp"

#include <Eigen/Core>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "json.hpp"

#include "darkgate/analysis.hpp"
#include "darkgate/dynamics.hpp"
#include "darkgate/selfcheck.hpp"

#ifndef DARKGATE_VERSION
#define DARKGATE_VERSION "unknown"
#endif

namespace darkgate {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) v[k] = n == 1 ? lo : lo + (hi - lo) * k / (n - 1);
  return v;
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;

  std::string csv(const std::string& manifest_hash, const std::string& manifest_file) const {
    std::string s = "# manifest=" + manifest_hash + " file=" + manifest_file + "\n";
    for (std::size_t c = 0; c < header.size(); ++c) s += (c ? "," : "") + header[c];
    s += "\n";
    const std::size_t rows = columns.empty() ? 0 : columns.front().size();
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < columns.size(); ++c) s += (c ? "," : "") + fmt(columns[c][r]);
      s += "\n";
    }
    return s;
  }
};

Table table_of(const ExperimentResult& r) {
  Table t;
  t.header.push_back(r.axis_name);
  t.columns.push_back(r.axis);
  for (const auto& s : r.fidelity) {
    t.header.push_back(s.name);
    t.columns.push_back(s.values);
  }
  for (const auto& s : r.leakage) {
    t.header.push_back(s.name);
    t.columns.push_back(s.values);
  }
  return t;
}

std::string eigen_version() {
  return std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
         std::to_string(EIGEN_MINOR_VERSION);
}

// Manifest without wall time; its hash identifies the run.
Json base_manifest(const std::string& command, const RunConfig& cfg, const std::string& data_file,
                   const std::vector<std::pair<std::string, std::string>>& metadata) {
  Json m;
  m["tool"] = "darkgate";
  m["version"] = DARKGATE_VERSION;
  m["eigen"] = eigen_version();
  m["compiler"] = __VERSION__;
  m["command"] = command;
  m["data_file"] = data_file;
  Json c = Json::object();
  const std::string echo = cfg.canonical_echo();
  std::size_t pos = 0;
  while (pos < echo.size()) {
    const auto nl = echo.find('\n', pos);
    const std::string line = echo.substr(pos, nl - pos);
    const auto eq = line.find(" = ");
    c[line.substr(0, eq)] = line.substr(eq + 3);
    pos = nl + 1;
  }
  m["config"] = c;
  Json md = Json::object();
  for (const auto& [k, v] : metadata) md[k] = v;
  m["metadata"] = md;
  return m;
}

// Writes <stem>.csv and <stem>.manifest.json.
void emit(const std::string& stem, const std::string& command, const RunConfig& cfg, const Table& table,
          const std::vector<std::pair<std::string, std::string>>& metadata, double wall_time_s,
          std::ostream& out) {
  const std::string data_file = stem + ".csv", manifest_file = stem + ".manifest.json";
  Json m = base_manifest(command, cfg, data_file, metadata);
  const std::string hash = fnv1a_hex(m.dump());
  m["manifest_hash"] = hash;
  m["wall_time_s"] = wall_time_s;
  write_outputs(cfg.out_dir, {{data_file, table.csv(hash, manifest_file)}, {manifest_file, m.dump(2) + "\n"}});
  out << "wrote " << (fs::path(cfg.out_dir) / data_file).string() << "\n";
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SimulationControls controls_of(const RunConfig& cfg) { return to_controls(cfg); }

double default_final_time(const RunConfig& cfg, const DeviceParams& p) {
  if (cfg.t_final_s > 0.0) return cfg.t_final_s;
  if (!(p.g1_ge > 0.0)) throw ConfigError("key 't_final_s': required when g1_ge_hz is 0");
  return 1.25 * gate_timing(1, 1, p.g1_ge).t_gate;
}

bool oracle_gate(const DeviceParams& p, const RunConfig& cfg, std::ostream& err) {
  const CheckResult r = analytic_oracle_check(p, cfg.n_max);
  if (r.passed) return true;
  err << "analytic oracle check failed: " << r.value << " > " << r.tolerance << "\n";
  return false;
}

std::string complex_cell(Complex z) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%+.6f%+.6fi", z.real(), z.imag());
  return buf;
}

int cmd_check(const RunConfig& cfg, const DeviceParams& p, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const CheckReport report = run_self_checks(p, cfg.n_max);
  const std::string text = report.summary();
  out << text << (report.all_passed() ? "all checks passed\n" : "self-check FAILED\n");
  Json m = base_manifest("check", cfg, "check.txt", {{"passed", report.all_passed() ? "true" : "false"}});
  const std::string hash = fnv1a_hex(m.dump());
  m["manifest_hash"] = hash;
  m["wall_time_s"] = seconds_since(t0);
  write_outputs(cfg.out_dir, {{"check.txt", "# manifest=" + hash + " file=check.manifest.json\n" + text},
                              {"check.manifest.json", m.dump(2) + "\n"}});
  return report.all_passed() ? exit_code::ok : exit_code::invariant_failure;
}

int cmd_evolve(const CliOptions& o, const RunConfig& cfg, const DeviceParams& p, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const double t_final = o.t ? *o.t : default_final_time(cfg, p);
  if (!(t_final > 0.0) || !std::isfinite(t_final)) throw ConfigError("--t must be a positive time in seconds");
  const CompositeSpace space = device_space(p, cfg.n_max);
  QuantumState psi0 = psi_max(space);
  if (o.state != "max") {
    BasisLabel b;
    try {
      b = parse_basis_label(o.state);
    } catch (const DomainError&) {
      throw ConfigError("--state must be one of gg, ge, eg, ee, max");
    }
    psi0 = computational_kets(space)[static_cast<std::size_t>(b)];
  }
  const Hamiltonian h = build_h2q(p, space);
  const auto channels = build_lindblad_channels(p, space);
  bool lossy = false;
  for (const auto& c : channels) lossy = lossy || c.rate > 0.0;
  const SimulationControls ctl = controls_of(cfg);
  const auto times = uniform_times(t_final, cfg.output_points);
  Trajectory traj = lossy ? propagate_lindblad(h, channels, QuantumState::density(psi0.to_density()), times,
                                               ctl.propagation())
                          : propagate_td(h, psi0, times, ctl.propagation());

  Table t;
  t.header = {"t", "P_gg", "P_ge", "P_eg", "P_ee", "leakage", "n_a", "n_b", "n_f"};
  t.columns.assign(t.header.size(), {});
  const auto kets = computational_kets(space);
  std::array<Index, 4> idx{};
  for (int k = 0; k < 4; ++k) kets[k].vector().cwiseAbs().maxCoeff(&idx[k]);
  const std::size_t sites[3] = {site::ra, site::rb, site::rf};
  std::vector<OperatorMatrix> numbers;
  for (auto s : sites) {
    const auto a = boson_annihilation(cfg.n_max);
    numbers.push_back(embed(a.adjoint() * a, s, space));
  }
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const QuantumState st = traj.state(k);
    const RealVector pop =
        st.kind() == QuantumState::Kind::Ket ? RealVector(st.vector().cwiseAbs2()) : RealVector(st.matrix().diagonal().real());
    t.columns[0].push_back(traj.times[k]);
    for (int c = 0; c < 4; ++c) t.columns[1 + c].push_back(pop(idx[c]));
    t.columns[5].push_back(leakage(st, space));
    for (int c = 0; c < 3; ++c) t.columns[6 + c].push_back(expectation(numbers[c], st));
  }
  auto md = params_snapshot(p);
  md.emplace_back("state", o.state);
  md.emplace_back("t_final_s", fmt(t_final));
  md.emplace_back("dynamics", lossy ? "lindblad" : "unitary");
  md.emplace_back("dt_used_s", fmt(traj.dt_used));
  emit("evolve_" + o.state, "evolve", cfg, t, md, seconds_since(t0), out);
  return exit_code::ok;
}

int cmd_cphase(const RunConfig& cfg, const DeviceParams& p, std::ostream& out, std::ostream& err) {
  if (!(p.g1_ge > 0.0)) throw ConfigError("key 'g1_ge_hz': cphase needs a nonzero coupling");
  if (!oracle_gate(p, cfg, err)) return exit_code::invariant_failure;
  const auto t0 = std::chrono::steady_clock::now();
  const SimulationControls ctl = controls_of(cfg);
  const GateTiming gt = gate_timing(1, 1, p.g1_ge);
  const ExperimentResult r = run_fig7a(p, uniform_times(default_final_time(cfg, p), cfg.output_points), ctl);
  const GateChannel ch = lindblad_gate_channel(p, gt.t_gate, cfg.n_max, ctl.propagation());
  const double fbar = average_gate_fidelity(ch, cfg.grid_n);
  const auto& f = r.fidelity.front().values;
  const std::size_t best = static_cast<std::size_t>(std::max_element(f.begin(), f.end()) - f.begin());
  out << "t_gate = " << fmt(gt.t_gate) << " s\n"
      << "g2_es required / 2pi = " << fmt(gt.g2_es_required / kTwoPi) << " Hz (configured "
      << fmt(p.g2_es() / kTwoPi) << ")\n"
      << "peak F_cp = " << fmt(f[best]) << " at t = " << fmt(r.axis[best]) << " s\n"
      << "average gate fidelity = " << fmt(fbar) << "\n"
      << "mean leakage = " << fmt(ch.mean_leakage()) << "\n";
  auto md = r.metadata;
  md.emplace_back("t_gate_s", fmt(gt.t_gate));
  md.emplace_back("average_gate_fidelity", fmt(fbar));
  emit("cphase", "cphase", cfg, table_of(r), md, seconds_since(t0), out);
  return exit_code::ok;
}

int cmd_tomography(const CliOptions& o, const RunConfig& cfg, const DeviceParams& p, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  GatePropagator which;
  if (o.propagator == "effective")
    which = GatePropagator::EffectivePrime;
  else if (o.propagator == "resonant")
    which = GatePropagator::Resonant;
  else if (o.propagator == "full")
    which = GatePropagator::Full;
  else
    throw ConfigError("--propagator must be one of effective, resonant, full");
  const SimulationControls ctl = controls_of(cfg);
  const TomographyResult tr = o.t ? cphase_tomography(p, which, *o.t, cfg.n_max, ctl.propagation())
                                  : cphase_tomography(p, which, cfg.n_max, ctl.propagation());
  out << "t = " << fmt(tr.time) << " s\n";
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) out << (j ? "  " : "") << complex_cell(tr.matrix(i, j));
    out << "\n";
  }
  out << "max |U - diag(1,1,-1,1)| = " << fmt(tr.deviation) << "\n";
  if (tr.degraded) out << "warning: leakage above 0.05 in some column\n";
  Table t;
  t.header = {"row", "col", "re", "im", "leakage_col"};
  t.columns.assign(5, {});
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      t.columns[0].push_back(i);
      t.columns[1].push_back(j);
      t.columns[2].push_back(tr.matrix(i, j).real());
      t.columns[3].push_back(tr.matrix(i, j).imag());
      t.columns[4].push_back(tr.leakage[j]);
    }
  auto md = params_snapshot(p);
  md.emplace_back("propagator", o.propagator);
  md.emplace_back("t_s", fmt(tr.time));
  md.emplace_back("deviation", fmt(tr.deviation));
  emit("tomography", "tomography", cfg, t, md, seconds_since(t0), out);
  return exit_code::ok;
}

int cmd_fig3(const CliOptions& o, const RunConfig& cfg, const DeviceParams& p, std::ostream& out,
             std::ostream& err) {
  if (!oracle_gate(p, cfg, err)) return exit_code::invariant_failure;
  const auto t0 = std::chrono::steady_clock::now();
  const auto deltas = o.deltas ? *o.deltas : cfg.fig3_deltas;
  for (double d : deltas)
    if (!(d > 1.0)) throw ConfigError("--deltas: every value must exceed 1");
  const ExperimentResult r =
      run_fig3(p, deltas, linspace(cfg.fig3_gt_min, cfg.fig3_gt_max, cfg.fig3_gt_points), controls_of(cfg));
  for (const auto& s : r.fidelity) {
    const auto it = std::max_element(s.values.begin(), s.values.end());
    out << s.name << ": peak " << fmt(*it) << " at gt = " << fmt(r.axis[it - s.values.begin()]) << "\n";
  }
  emit("fig3", "fig3", cfg, table_of(r), r.metadata, seconds_since(t0), out);
  return exit_code::ok;
}

int cmd_fig7(const CliOptions& o, const RunConfig& cfg, const DeviceParams& p, std::ostream& out,
             std::ostream& err) {
  if (!(p.g1_ge > 0.0)) throw ConfigError("key 'g1_ge_hz': fig7 needs a nonzero coupling");
  if (!oracle_gate(p, cfg, err)) return exit_code::invariant_failure;
  const auto t0 = std::chrono::steady_clock::now();
  const SimulationControls ctl = controls_of(cfg);
  ExperimentResult r;
  if (o.panel == "a") {
    r = run_fig7a(p, uniform_times(default_final_time(cfg, p), cfg.output_points), ctl);
  } else {
    Panel panel;
    try {
      panel = parse_panel(o.panel);
    } catch (const DomainError&) {
      throw ConfigError("--panel must be one of a, b, c, d, e, f");
    }
    const auto axis = cfg.fig7_axis_points > 0
                          ? linspace(*cfg.fig7_axis_min, *cfg.fig7_axis_max, cfg.fig7_axis_points)
                          : default_panel_axis(panel, p);
    r = run_fig7_panel(panel, p, axis, ctl);
  }
  const auto& f = r.fidelity.front().values;
  const auto it = std::max_element(f.begin(), f.end());
  out << r.name << ": max " << r.fidelity.front().name << " " << fmt(*it) << " at " << r.axis_name << " = "
      << fmt(r.axis[it - f.begin()]) << " " << r.axis_unit << "\n";
  emit("fig7" + o.panel, "fig7", cfg, table_of(r), r.metadata, seconds_since(t0), out);
  return exit_code::ok;
}

int cmd_sweep(const CliOptions& o, const RunConfig& cfg, const DeviceParams& p, std::ostream& out,
              std::ostream& err) {
  if (!oracle_gate(p, cfg, err)) return exit_code::invariant_failure;
  const auto t0 = std::chrono::steady_clock::now();
  const double lo = o.from.value_or(cfg.sweep_from_hz), hi = o.to.value_or(cfg.sweep_to_hz),
               step = o.step.value_or(cfg.sweep_step_hz);
  if (!(lo > 0.0) || !(hi >= lo) || !(step > 0.0)) throw ConfigError("sweep needs 0 < from <= to and step > 0");
  const SweepResult s = optimal_coupling_sweep(p, lo, hi, step, controls_of(cfg));
  out << "best g1_ge/2pi = " << fmt(s.best_g1_ge_hz) << " Hz\n";
  auto md = s.result.metadata;
  md.emplace_back("best_g1_ge_hz", fmt(s.best_g1_ge_hz));
  emit("sweep", "sweep", cfg, table_of(s.result), md, seconds_since(t0), out);
  return exit_code::ok;
}

}  // namespace

std::string fnv1a_hex(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string to_csv(const ExperimentResult& r, const std::string& manifest_hash) {
  return table_of(r).csv(manifest_hash, r.name + ".manifest.json");
}

void write_outputs(const std::string& dir, const std::vector<std::pair<std::string, std::string>>& files) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory '" + dir + "'");
  std::vector<fs::path> temps, finals;
  auto cleanup = [&] {
    for (const auto& p : temps) fs::remove(p, ec);
    for (const auto& p : finals) fs::remove(p, ec);
  };
  for (const auto& [name, content] : files) {
    const fs::path tmp = fs::path(dir) / (name + ".tmp");
    temps.push_back(tmp);
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    f << content;
    f.close();
    if (!f) {
      cleanup();
      throw IoError("cannot write '" + tmp.string() + "'");
    }
  }
  for (std::size_t i = 0; i < files.size(); ++i) {
    const fs::path dst = fs::path(dir) / files[i].first;
    fs::rename(temps[i], dst, ec);
    if (ec) {
      cleanup();
      throw IoError("cannot move output into place: '" + dst.string() + "'");
    }
    finals.push_back(dst);
  }
}

RunConfig resolve_config(const CliOptions& opts) {
  const std::string source = !opts.config.empty() ? opts.config
                             : opts.command == "fig3" ? "paper_sec3_fig3"
                                                      : "paper_sec4";
  RunConfig cfg = load_config(source);
  if (opts.out) cfg.out_dir = *opts.out;
  if (opts.nmax) cfg.n_max = *opts.nmax;
  if (opts.dt) cfg.dt_s = *opts.dt;
  cfg.validate();
  return cfg;
}

int run_command(const CliOptions& o, std::ostream& out, std::ostream& err) {
  try {
    const RunConfig cfg = resolve_config(o);
    const DeviceParams p = to_device_params(cfg);
    if (o.command == "check") return cmd_check(cfg, p, out);
    if (o.command == "evolve") return cmd_evolve(o, cfg, p, out);
    if (o.command == "cphase") return cmd_cphase(cfg, p, out, err);
    if (o.command == "tomography") return cmd_tomography(o, cfg, p, out);
    if (o.command == "fig3") return cmd_fig3(o, cfg, p, out, err);
    if (o.command == "fig7") return cmd_fig7(o, cfg, p, out, err);
    if (o.command == "sweep") return cmd_sweep(o, cfg, p, out, err);
    err << "unknown command '" << o.command << "'\n";
    return exit_code::config_error;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return exit_code::config_error;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return exit_code::io_error;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::invariant_failure;
  }
}

}  // namespace darkgate
