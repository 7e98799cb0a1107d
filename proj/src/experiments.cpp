#include "darkgate/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>

#include "darkgate/parallel.hpp"

namespace darkgate {
namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) v[k] = n == 1 ? lo : lo + (hi - lo) * k / (n - 1);
  return v;
}

double lifetime_of(double rate) { return rate > 0.0 ? 1.0 / rate : std::numeric_limits<double>::infinity(); }

void add_controls(ExperimentResult& r, const SimulationControls& ctl) {
  r.metadata.emplace_back("n_max", std::to_string(ctl.n_max));
  r.metadata.emplace_back("dt_s", ctl.dt > 0.0 ? fmt_double(ctl.dt) : "auto");
  r.metadata.emplace_back("output_points", std::to_string(ctl.output_points));
  r.metadata.emplace_back("grid_n", std::to_string(ctl.grid_n));
  r.metadata.emplace_back("peak_window", fmt_double(ctl.peak_window_lo) + ":" + fmt_double(ctl.peak_window_hi) +
                                             ":" + std::to_string(ctl.peak_window_points));
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace

std::vector<std::pair<std::string, std::string>> params_snapshot(const DeviceParams& p) {
  auto hz = [](double w) { return fmt_double(w / kTwoPi); };
  return {{"omega_a_hz", hz(p.omega_a)},
          {"omega_b_hz", hz(p.omega_b)},
          {"omega_f_hz", hz(p.omega_f)},
          {"omega1_ge_hz", hz(p.omega1_ge)},
          {"omega1_es_hz", hz(p.omega1_es)},
          {"omega2_ge_hz", hz(p.omega2_ge)},
          {"omega2_es_hz", hz(p.omega2_es)},
          {"g1_ge_hz", hz(p.g1_ge)},
          {"g2_ge_hz", hz(p.g2_ge)},
          {"gf_a_hz", hz(p.gf_a)},
          {"gf_b_hz", hz(p.gf_b)},
          {"kappa_a_lifetime_s", fmt_double(lifetime_of(p.kappa_a))},
          {"kappa_b_lifetime_s", fmt_double(lifetime_of(p.kappa_b))},
          {"kappa_f_lifetime_s", fmt_double(lifetime_of(p.kappa_f))},
          {"gamma1_ge_lifetime_s", fmt_double(lifetime_of(p.gamma1_ge))},
          {"gamma2_ge_lifetime_s", fmt_double(lifetime_of(p.gamma2_ge))}};
}

void ExperimentResult::validate() const {
  auto check = [&](const std::vector<Series>& all, bool is_fidelity) {
    for (const auto& s : all) {
      if (s.values.size() != axis.size())
        throw Error("experiment '" + name + "': series '" + s.name + "' length differs from axis");
      if (!is_fidelity) continue;
      for (double v : s.values)
        if (!(v >= 0.0 && v <= 1.0 + 1e-9))
          throw Error("experiment '" + name + "': fidelity " + fmt_double(v) + " outside [0, 1]");
    }
  };
  check(fidelity, true);
  check(leakage, false);
}

const Series& ExperimentResult::fidelity_series(const std::string& series_name) const {
  for (const auto& s : fidelity)
    if (s.name == series_name) return s;
  throw Error("experiment '" + name + "' has no series '" + series_name + "'");
}

// ---------------------------------------------------------------------------

ExperimentResult run_fig3(const DeviceParams& base, const std::vector<double>& deltas,
                          const std::vector<double>& gt_grid, const SimulationControls& ctl, bool dissipative) {
  const Stopwatch clock;
  if (!(base.g1_ge > 0.0)) throw DomainError("run_fig3: g1_ge must be > 0");
  for (double d : deltas)
    if (!(d > 1.0)) throw DomainError("run_fig3: every Delta must exceed 1");

  std::vector<double> times;
  for (double gt : gt_grid) times.push_back(gt * kTwoPi / base.g1_ge);

  struct Column {
    std::vector<double> fidelity, leakage;
  };
  const auto columns = parallel_map(deltas.size(), [&](std::size_t n) {
    DeviceParams p = base;
    p.gf_a = p.gf_b = deltas[n] * p.g1_ge;
    const CompositeSpace space = device_space(p, ctl.n_max);
    const Hamiltonian h = build_h2q(p, space);
    const QuantumState target = psi_max_cphase(space);
    Column col;
    if (dissipative) {
      const auto channels = build_lindblad_channels(p, space);
      const auto rho0 = QuantumState::density(psi_max(space).to_density());
      const Trajectory traj = propagate_lindblad(h, channels, rho0, times, ctl.propagation());
      const Vector tgt = traj.restrict(target.vector());
      for (std::size_t k = 0; k < traj.size(); ++k) {
        col.fidelity.push_back(state_fidelity_mixed(QuantumState::ket(tgt), traj.reduced_state(k)));
        col.leakage.push_back(leakage(traj.state(k), space));
      }
    } else {
      const Trajectory traj = propagate_td(h, psi_max(space), times, ctl.propagation());
      const Vector tgt = traj.restrict(target.vector());
      for (std::size_t k = 0; k < traj.size(); ++k) {
        col.fidelity.push_back(state_fidelity_pure(QuantumState::ket(tgt), traj.reduced_state(k)));
        col.leakage.push_back(leakage(traj.state(k), space));
      }
    }
    return col;
  });

  ExperimentResult r;
  r.name = dissipative ? "fig3_dissipative" : "fig3";
  r.axis_name = "gt";
  r.axis_unit = "1";
  r.axis = gt_grid;
  for (std::size_t n = 0; n < deltas.size(); ++n) {
    char label[64];
    std::snprintf(label, sizeof label, "%g", deltas[n]);
    r.fidelity.push_back({std::string("F_delta") + label, columns[n].fidelity});
    r.leakage.push_back({std::string("leak_delta") + label, columns[n].leakage});
  }
  r.metadata = params_snapshot(base);
  std::string ds;
  for (double d : deltas) ds += (ds.empty() ? "" : ",") + fmt_double(d);
  r.metadata.emplace_back("deltas", ds);
  r.metadata.emplace_back("dissipative", dissipative ? "true" : "false");
  add_controls(r, ctl);
  r.wall_time_s = clock.seconds();
  r.validate();
  return r;
}

ExperimentResult run_fig7a(const DeviceParams& p, const std::vector<double>& t_grid, const SimulationControls& ctl) {
  const Stopwatch clock;
  const CompositeSpace space = device_space(p, ctl.n_max);
  const Hamiltonian h = build_h2q_resonant(p, space) + build_unresonant_corrections(p, space);
  const auto channels = build_lindblad_channels(p, space);
  const auto rho0 = QuantumState::density(psi_max(space).to_density());
  const Trajectory traj = propagate_lindblad(h, channels, rho0, t_grid, ctl.propagation());
  const QuantumState target = QuantumState::ket(traj.restrict(psi_max_cphase(space).vector()));

  ExperimentResult r;
  r.name = "fig7a";
  r.axis_name = "t";
  r.axis_unit = "s";
  r.axis = t_grid;
  Series f{"F_cp", {}}, l{"leakage", {}};
  for (std::size_t k = 0; k < traj.size(); ++k) {
    f.values.push_back(state_fidelity_mixed(target, traj.reduced_state(k)));
    l.values.push_back(leakage(traj.state(k), space));
  }
  r.fidelity.push_back(std::move(f));
  r.leakage.push_back(std::move(l));
  r.metadata = params_snapshot(p);
  r.metadata.emplace_back("max_trace_error", fmt_double(traj.max_trace_error));
  r.metadata.emplace_back("min_eigenvalue", fmt_double(traj.min_eigenvalue));
  add_controls(r, ctl);
  r.wall_time_s = clock.seconds();
  r.validate();
  return r;
}

Panel parse_panel(const std::string& s) {
  if (s == "b") return Panel::B;
  if (s == "c") return Panel::C;
  if (s == "d") return Panel::D;
  if (s == "e") return Panel::E;
  if (s == "f") return Panel::F;
  throw DomainError("unknown panel '" + s + "' (expected a..f)");
}

const char* to_string(Panel p) {
  switch (p) {
    case Panel::B: return "b";
    case Panel::C: return "c";
    case Panel::D: return "d";
    case Panel::E: return "e";
    case Panel::F: return "f";
  }
  return "?";
}

std::string panel_axis_name(Panel panel) {
  switch (panel) {
    case Panel::B: return "g1_ge";
    case Panel::C: return "q2_anharmonicity";
    case Panel::D: return "omega2_es_offset";
    case Panel::E: return "kappa_f_lifetime";
    case Panel::F: return "uniform_lifetime";
  }
  return "";
}

std::string panel_axis_unit(Panel panel) {
  return panel == Panel::E || panel == Panel::F ? "s" : "Hz";
}

std::vector<double> default_panel_axis(Panel panel, const DeviceParams& p) {
  switch (panel) {
    case Panel::B: return linspace(0.5 * p.g1_ge / kTwoPi, 1.5 * p.g1_ge / kTwoPi, 11);
    case Panel::C: return linspace(0.5 * p.anharmonicity2() / kTwoPi, 1.5 * p.anharmonicity2() / kTwoPi, 11);
    case Panel::D: return linspace(-0.5 * p.g1_ge / kTwoPi, 0.5 * p.g1_ge / kTwoPi, 9);
    case Panel::E: {
      std::vector<double> v;
      for (int k = 0; k <= 12; ++k) v.push_back(1e-9 * std::pow(10.0, k * std::log10(5e4) / 12.0));
      return v;
    }
    case Panel::F: return linspace(10e-6, 100e-6, 10);
  }
  return {};
}

DeviceParams apply_panel_value(Panel panel, const DeviceParams& p, double value) {
  DeviceParams q = p;
  switch (panel) {
    case Panel::B:
      q.g1_ge = kTwoPi * value;
      break;
    case Panel::C:
      q.omega2_ge = q.omega2_es + kTwoPi * value;
      break;
    case Panel::D: {
      const double anh = p.anharmonicity2();
      q.omega2_es = p.omega_b + kTwoPi * value;
      q.omega2_ge = q.omega2_es + anh;
      break;
    }
    case Panel::E:
      if (!(value > 0.0)) throw DomainError("kappa_f lifetime must be > 0");
      q.kappa_f = std::isfinite(value) ? 1.0 / value : 0.0;
      break;
    case Panel::F:
      if (!(value > 0.0)) throw DomainError("lifetime must be > 0");
      set_uniform_lifetime(q, value);
      break;
  }
  q.validate();
  return q;
}

PeakFidelity peak_cphase_fidelity(const DeviceParams& p, const SimulationControls& ctl) {
  const double tg = gate_timing(1, 1, p.g1_ge).t_gate;
  const auto times = linspace(ctl.peak_window_lo * tg, ctl.peak_window_hi * tg, ctl.peak_window_points);
  const CompositeSpace space = device_space(p, ctl.n_max);
  const Hamiltonian h = build_h2q_resonant(p, space) + build_unresonant_corrections(p, space);
  const auto channels = build_lindblad_channels(p, space);
  const auto rho0 = QuantumState::density(psi_max(space).to_density());
  const Trajectory traj = propagate_lindblad(h, channels, rho0, times, ctl.propagation());
  const QuantumState target = QuantumState::ket(traj.restrict(psi_max_cphase(space).vector()));

  PeakFidelity best{-1.0, 0.0, 0.0};
  std::size_t arg = 0;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const double f = state_fidelity_mixed(target, traj.reduced_state(k));
    if (f > best.fidelity) {
      best.fidelity = f;
      best.time = times[k];
      arg = k;
    }
  }
  best.leakage = leakage(traj.state(arg), space);
  return best;
}

ExperimentResult run_fig7_panel(Panel panel, const DeviceParams& p, const std::vector<double>& axis,
                                const SimulationControls& ctl) {
  const Stopwatch clock;
  if (axis.empty()) throw DomainError("panel scan needs at least one axis value");

  const auto points = parallel_map(axis.size(), [&](std::size_t n) {
    const DeviceParams q = apply_panel_value(panel, p, axis[n]);
    if (panel == Panel::F) {
      const double t = gate_timing(1, 1, q.g1_ge).t_gate;
      const GateChannel ch = lindblad_gate_channel(q, t, ctl.n_max, ctl.propagation());
      return std::pair{average_gate_fidelity(ch, ctl.grid_n), ch.mean_leakage()};
    }
    const PeakFidelity pk = peak_cphase_fidelity(q, ctl);
    return std::pair{pk.fidelity, pk.leakage};
  });

  ExperimentResult r;
  r.name = std::string("fig7") + to_string(panel);
  r.axis_name = panel_axis_name(panel);
  r.axis_unit = panel_axis_unit(panel);
  r.axis = axis;
  Series f{panel == Panel::F ? "F_avg" : "F_cp_peak", {}}, l{"leakage", {}};
  for (const auto& [fid, leak] : points) {
    f.values.push_back(fid);
    l.values.push_back(leak);
  }
  r.fidelity.push_back(std::move(f));
  r.leakage.push_back(std::move(l));
  r.metadata = params_snapshot(p);
  r.metadata.emplace_back("panel", to_string(panel));
  add_controls(r, ctl);
  r.wall_time_s = clock.seconds();
  r.validate();
  return r;
}

SweepResult optimal_coupling_sweep(const DeviceParams& p, double low_hz, double high_hz, double step_hz,
                                   const SimulationControls& ctl) {
  const Stopwatch clock;
  if (!(step_hz > 0.0) || !std::isfinite(step_hz)) throw DomainError("sweep: step must be > 0");
  if (!(low_hz > 0.0) || !(high_hz >= low_hz)) throw DomainError("sweep: empty or invalid coupling range");
  const long n = static_cast<long>(std::floor((high_hz - low_hz) / step_hz + 1e-9)) + 1;
  std::vector<double> grid;
  for (long k = 0; k < n; ++k) grid.push_back(low_hz + static_cast<double>(k) * step_hz);

  const auto points = parallel_map(grid.size(), [&](std::size_t k) {
    DeviceParams q = p;
    q.g1_ge = kTwoPi * grid[k];
    q.g2_ge = gate_timing(1, 1, q.g1_ge).g2_es_required / std::sqrt(2.0);
    return peak_cphase_fidelity(q, ctl);
  });

  SweepResult out;
  ExperimentResult& r = out.result;
  r.name = "sweep";
  r.axis_name = "g1_ge";
  r.axis_unit = "Hz";
  r.axis = grid;
  Series f{"F_cp_peak", {}}, l{"leakage", {}};
  std::size_t best = 0;
  for (std::size_t k = 0; k < points.size(); ++k) {
    f.values.push_back(points[k].fidelity);
    l.values.push_back(points[k].leakage);
    if (points[k].fidelity > points[best].fidelity) best = k;
  }
  out.best_g1_ge_hz = grid[best];
  r.fidelity.push_back(std::move(f));
  r.leakage.push_back(std::move(l));
  r.metadata = params_snapshot(p);
  r.metadata.emplace_back("sweep", fmt_double(low_hz) + ":" + fmt_double(high_hz) + ":" + fmt_double(step_hz));
  add_controls(r, ctl);
  r.wall_time_s = clock.seconds();
  r.validate();
  return out;
}

}  // namespace darkgate
