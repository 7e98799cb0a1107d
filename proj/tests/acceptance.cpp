// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "darkgate/analysis.hpp"
#include "darkgate/cli.hpp"
#include "darkgate/config.hpp"
#include "darkgate/dynamics.hpp"
#include "darkgate/experiments.hpp"
#include "darkgate/normal_modes.hpp"
#include "darkgate/selfcheck.hpp"

using namespace darkgate;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& what) {
  std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", id, what.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string f6(double v) {
  char b[48];
  std::snprintf(b, sizeof b, "%.6f", v);
  return b;
}

std::string g3(double v) {
  char b[48];
  std::snprintf(b, sizeof b, "%.3g", v);
  return b;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v;
  for (int k = 0; k < n; ++k) v.push_back(lo + (hi - lo) * k / (n - 1));
  return v;
}

// Auto step for the gate Hamiltonian of `p`, on the support reached from the computational states.
double auto_dt(const DeviceParams& p, int n_max) {
  const CompositeSpace s = device_space(p, n_max);
  const Hamiltonian h = build_h2q(p, s);
  const auto ch = build_lindblad_channels(p, s);
  std::vector<Index> seed;
  for (const auto& k : computational_kets(s)) {
    Index i;
    k.vector().cwiseAbs().maxCoeff(&i);
    seed.push_back(i);
  }
  return max_stable_dt(h, reachable_support(h, ch, seed));
}

struct Fig3Peaks {
  std::vector<double> fidelity, gt;
  double seconds = 0.0;
};

Fig3Peaks fig3_peaks(const DeviceParams& base, const std::vector<double>& deltas, int n_max, double dt_scale) {
  Fig3Peaks out;
  const auto grid = linspace(0.0, 1.0, 401);
  for (double d : deltas) {
    SimulationControls ctl;
    ctl.n_max = n_max;
    if (dt_scale != 1.0) {
      DeviceParams q = base;
      q.gf_a = q.gf_b = d * q.g1_ge;
      ctl.dt = dt_scale * auto_dt(q, n_max);
    }
    const auto t0 = std::chrono::steady_clock::now();
    const ExperimentResult r = run_fig3(base, {d}, grid, ctl);
    out.seconds += seconds_since(t0);
    const auto& v = r.fidelity[0].values;
    const auto it = std::max_element(v.begin(), v.end());
    out.fidelity.push_back(*it);
    out.gt.push_back(grid[it - v.begin()]);
  }
  return out;
}

struct Fig7aPeak {
  double fidelity = 0.0, time = 0.0, seconds = 0.0, trace_error = 0.0, min_eig = 0.0;
};

Fig7aPeak fig7a_peak(const DeviceParams& p, int n_max, double dt_scale) {
  SimulationControls ctl;
  ctl.n_max = n_max;
  if (dt_scale != 1.0) ctl.dt = dt_scale * auto_dt(p, n_max);
  const double tg = gate_timing(1, 1, p.g1_ge).t_gate;
  // 0.1 ns sampling across the gate window.
  const auto t = linspace(0.0, 1.1 * tg, 973);
  const auto t0 = std::chrono::steady_clock::now();
  const ExperimentResult r = run_fig7a(p, t, ctl);
  Fig7aPeak out;
  out.seconds = seconds_since(t0);
  const auto& v = r.fidelity[0].values;
  const auto it = std::max_element(v.begin(), v.end());
  out.fidelity = *it;
  out.time = t[it - v.begin()];
  for (const auto& [k, val] : r.metadata) {
    if (k == "max_trace_error") out.trace_error = std::stod(val);
    if (k == "min_eigenvalue") out.min_eig = std::stod(val);
  }
  return out;
}

double gamma_point(const DeviceParams& sec4, int n_max, double dt_scale) {
  DeviceParams p = sec4;
  p.gf_a = p.gf_b = 5.0 * p.g1_ge;
  set_uniform_lifetime(p, 20e-6);
  PropagationOptions o;
  if (dt_scale != 1.0) o.dt = dt_scale * auto_dt(p, n_max);
  return average_gate_fidelity(p, 8, n_max, o);
}

std::string read(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

int main() {
  const DeviceParams fig3_base = to_device_params(load_config("paper_sec3_fig3"));
  const DeviceParams sec4 = to_device_params(load_config("paper_sec4"));
  const std::vector<double> deltas{5.0, 10.0, 25.0};
  const double targets[3] = {0.988, 0.996, 0.998};

  // 1. Line-ratio scan.
  const Fig3Peaks f3 = fig3_peaks(fig3_base, deltas, 2, 1.0);
  {
    bool ok = f3.seconds < 120.0;
    std::string msg = "fig3 peaks";
    for (int k = 0; k < 3; ++k) {
      ok = ok && std::abs(f3.fidelity[k] - targets[k]) <= 0.005;
      msg += "  D=" + g3(deltas[k]) + ": " + f6(f3.fidelity[k]) + " at gt " + g3(f3.gt[k]) + " (target " +
             g3(targets[k]) + " +-0.005)";
    }
    report(1, ok, msg + "  [" + g3(f3.seconds) + " s]");
  }

  // 2. Lossy gate trace.
  const Fig7aPeak f7 = fig7a_peak(sec4, 2, 1.0);
  report(2,
         std::abs(f7.fidelity - 0.9928) <= 0.005 && std::abs(f7.time - 88.1e-9) <= 1e-9 && f7.seconds < 300.0,
         "fig7a peak F_cp " + f6(f7.fidelity) + " (0.9928 +-0.005) at " + g3(f7.time * 1e9) +
             " ns (88.1 +-1 ns)  [" + g3(f7.seconds) + " s]");

  // 3. Average gate fidelity at 20 us, Delta = 5.
  const auto t3 = std::chrono::steady_clock::now();
  const double fbar = gamma_point(sec4, 2, 1.0);
  report(3, std::abs(fbar - 0.98) <= 0.01,
         "average gate fidelity " + f6(fbar) + " (0.98 +-0.01)  [" + g3(seconds_since(t3)) + " s]");

  // 4. Closed forms against the numerical propagator.
  {
    const CheckResult r = analytic_oracle_check(sec4, 2, 20);
    report(4, r.passed, "analytic oracle, worst defect " + g3(r.value) + " (populations 1e-10, fidelity 1e-9)");
  }

  // 5. Timing algebra.
  {
    const double g1 = kTwoPi * 8e6;
    const GateTiming gt = gate_timing(1, 1, g1);
    const double e1 = std::abs(gt.g2_es_required / g1 - std::sqrt(3.0));
    const double e2 = std::abs(g1 / kTwoPi * gt.t_gate - std::sqrt(2.0) / 2.0);
    report(5, e1 < 1e-12 && e2 < 1e-12,
           "g2_es/g1 - sqrt3 = " + g3(e1) + ", (g1/2pi) t_gate - sqrt2/2 = " + g3(e2) + " (1e-12)");
  }

  // 6. Collective-mode Hamiltonian.
  {
    const DeviceParams rp = resonant_copy(sec4);
    const HDoublePrimeCheck c = verify_h_double_prime(rp, 2);
    const double w = rp.omega_a, g = std::sqrt(2.0) * rp.gf_a;
    const double spec = std::max({std::abs(c.collective_frequencies[0] - (w - g)),
                                  std::abs(c.collective_frequencies[1] - w),
                                  std::abs(c.collective_frequencies[2] - (w + g))}) /
                        w;
    report(6, c.residual_le1 < 1e-10 && c.residual_le2 < 1e-8 && spec < 1e-10,
           "H'' residual " + g3(c.residual_le1) + " (<=1 exc, 1e-10), " + g3(c.residual_le2) +
               " (<=2 exc, 1e-8), spectrum " + g3(spec) + " (1e-10); relative to max|H'| and omega");
  }

  // 7. The line stays dark.
  {
    std::vector<double> peaks;
    for (double d : deltas) {
      DeviceParams p = fig3_base;
      p.gf_a = p.gf_b = d * p.g1_ge;
      const CompositeSpace s = device_space(p, 2);
      Trajectory tr = propagate_td(build_h2q(p, s), psi_max(s), gate_timing(1, 1, p.g1_ge).t_gate, 0.0, 400);
      const auto f = embed(boson_annihilation(2), site::rf, s);
      record_observable(tr, "n_f", f.adjoint() * f);
      const auto& v = tr.observables.at("n_f");
      peaks.push_back(*std::max_element(v.begin(), v.end()));
    }
    report(7, peaks[2] < 0.01 && peaks[0] > peaks[1] && peaks[1] > peaks[2],
           "max <f+f> during the gate: D=5 " + g3(peaks[0]) + ", D=10 " + g3(peaks[1]) + ", D=25 " +
               g3(peaks[2]) + " (< 0.01 at D=25, decreasing)");
  }

  // 8. Numerical hygiene.
  {
    bool ok = true;
    std::string msg;

    // Trace and positivity over the lossy runs.
    const bool lindblad_ok = f7.trace_error < 1e-8 && f7.min_eig > -1e-8;
    ok = ok && lindblad_ok;
    msg += "trace err " + g3(f7.trace_error) + ", min eig " + g3(f7.min_eig);

    // Zero-rate Lindblad against unitary propagation.
    {
      const CompositeSpace s = device_space(fig3_base, 2);
      const Hamiltonian h = build_h2q(fig3_base, s);
      const auto ch = build_lindblad_channels(fig3_base, s);
      const std::vector<double> times{0.0, gate_timing(1, 1, fig3_base.g1_ge).t_gate};
      const QuantumState rho =
          propagate_lindblad(h, ch, QuantumState::density(psi_max(s).to_density()), times).final_state();
      const QuantumState psi = propagate_td(h, psi_max(s), times).final_state();
      const double d = 1.0 - state_fidelity_mixed(psi, rho);
      ok = ok && d < 1e-8;
      msg += "; zero-rate vs unitary " + g3(d);
    }

    // Halving dt.
    double worst_dt = 0.0;
    const Fig3Peaks f3h = fig3_peaks(fig3_base, deltas, 2, 0.5);
    for (int k = 0; k < 3; ++k) worst_dt = std::max(worst_dt, std::abs(f3h.fidelity[k] - f3.fidelity[k]));
    const Fig7aPeak f7h = fig7a_peak(sec4, 2, 0.5);
    worst_dt = std::max(worst_dt, std::abs(f7h.fidelity - f7.fidelity));
    const double fbar_h = gamma_point(sec4, 2, 0.5);
    worst_dt = std::max(worst_dt, std::abs(fbar_h - fbar));
    ok = ok && worst_dt < 1e-6;
    msg += "; dt/2 shift " + g3(worst_dt) + " (1e-6)";

    // Fock cutoff 3.
    double worst_n = 0.0;
    const Fig3Peaks f33 = fig3_peaks(fig3_base, deltas, 3, 1.0);
    for (int k = 0; k < 3; ++k) worst_n = std::max(worst_n, std::abs(f33.fidelity[k] - f3.fidelity[k]));
    const Fig7aPeak f73 = fig7a_peak(sec4, 3, 1.0);
    worst_n = std::max(worst_n, std::abs(f73.fidelity - f7.fidelity));
    const double fbar3 = gamma_point(sec4, 3, 1.0);
    worst_n = std::max(worst_n, std::abs(fbar3 - fbar));
    const bool hygiene3 = f73.trace_error < 1e-8 && f73.min_eig > -1e-8 && f7h.trace_error < 1e-8 &&
                          f7h.min_eig > -1e-8;
    ok = ok && worst_n < 0.002 && hygiene3;
    msg += "; n_max 3 vs 2 shift " + g3(worst_n) + " (0.002)";
    report(8, ok, msg);
  }

  // 9. Byte-identical CSV from two fig3 runs.
  {
    const fs::path dir = fs::temp_directory_path() / "darkgate_acceptance_fig3";
    fs::remove_all(dir);
    CliOptions o;
    o.command = "fig3";
    o.out = dir.string();
    std::ostringstream sink;
    const int rc1 = run_command(o, sink, sink);
    const std::string first = read(dir / "fig3.csv");
    fs::remove(dir / "fig3.csv");
    const int rc2 = run_command(o, sink, sink);
    const std::string second = read(dir / "fig3.csv");
    report(9, rc1 == 0 && rc2 == 0 && !first.empty() && first == second,
           "two fig3 runs, " + std::to_string(first.size()) + " bytes, identical: " +
               (first == second ? "yes" : "no"));
    fs::remove_all(dir);
  }

  std::printf("%s: %d criterion(s) failed\n", failures ? "FAILED" : "ALL PASSED", failures);
  return failures ? 1 : 0;
}
