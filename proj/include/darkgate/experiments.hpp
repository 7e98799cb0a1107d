#pragma once

#include <string>
#include <utility>
#include <vector>

#include "darkgate/analysis.hpp"
#include "darkgate/dynamics.hpp"
#include "darkgate/model.hpp"

namespace darkgate {

struct SimulationControls {
  int n_max = 2;
  double dt = 0.0;         // 0: largest admissible step
  int output_points = 200;
  int grid_n = 8;
  // Peak search window for scans, as fractions of the k=m=1 gate time.
  double peak_window_lo = 0.85;
  double peak_window_hi = 1.15;
  int peak_window_points = 121;

  PropagationOptions propagation() const { return {dt, output_points, true}; }
};

struct Series {
  std::string name;
  std::vector<double> values;
};

struct ExperimentResult {
  std::string name;
  std::string axis_name;
  std::string axis_unit;
  std::vector<double> axis;
  std::vector<Series> fidelity;
  std::vector<Series> leakage;
  // Everything needed to reproduce the run: parameters (Hz / s), dt, n_max, grids.
  std::vector<std::pair<std::string, std::string>> metadata;
  double wall_time_s = 0.0;

  // Fidelities in [0, 1 + 1e-9], every series as long as the axis.
  void validate() const;
  const Series& fidelity_series(const std::string& name) const;
};

/// Unitary H_2q from |Psi_max>; fidelity against |Psi_max^cp> on gt = (g1_ge / 2pi) t.
/// One fidelity series per line ratio Delta = gf / g1_ge.
ExperimentResult run_fig3(const DeviceParams& base, const std::vector<double>& deltas,
                          const std::vector<double>& gt_grid, const SimulationControls& ctl = {},
                          bool dissipative = false);

/// Lindblad F_cp(t) from |Psi_max><Psi_max| with H_2q' plus the unresonant corrections.
ExperimentResult run_fig7a(const DeviceParams& p, const std::vector<double>& t_grid,
                           const SimulationControls& ctl = {});

enum class Panel { B, C, D, E, F };

Panel parse_panel(const std::string& s);
const char* to_string(Panel p);

/// Default scan axis for a robustness panel, in the panel's axis units.
std::vector<double> default_panel_axis(Panel panel, const DeviceParams& p);
std::string panel_axis_name(Panel panel);
std::string panel_axis_unit(Panel panel);

/// Returns a copy of `p` with the panel's parameter set to `value` (axis units).
DeviceParams apply_panel_value(Panel panel, const DeviceParams& p, double value);

/// One-axis robustness scan. Panels b-e report the peak F_cp over the gate
/// window; panel f reports the average gate fidelity at the gate time.
ExperimentResult run_fig7_panel(Panel panel, const DeviceParams& p, const std::vector<double>& axis,
                                const SimulationControls& ctl = {});

struct PeakFidelity {
  double fidelity = 0.0;
  double time = 0.0;
  double leakage = 0.0;
};

/// Max of F_cp over the gate window for the device `p`.
PeakFidelity peak_cphase_fidelity(const DeviceParams& p, const SimulationControls& ctl);

struct SweepResult {
  double best_g1_ge_hz = 0.0;
  ExperimentResult result;
};

/// Scans g1_ge/2pi over [low, high] (Hz) with g2_es slaved to sqrt3 g1_ge;
/// ties resolve to the lowest coupling.
SweepResult optimal_coupling_sweep(const DeviceParams& p, double low_hz, double high_hz, double step_hz,
                                   const SimulationControls& ctl = {});

std::vector<std::pair<std::string, std::string>> params_snapshot(const DeviceParams& p);

}  // namespace darkgate
