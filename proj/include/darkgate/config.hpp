#pragma once

#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "darkgate/experiments.hpp"
#include "darkgate/model.hpp"

namespace darkgate {

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Run configuration as written in a config file: frequencies as omega/2pi in
/// Hz, lifetimes in seconds ("inf" for lossless). Conversion to angular units
/// happens in to_device_params, never here.
struct RunConfig {
  double omega_a_hz = 0, omega_b_hz = 0, omega_f_hz = 0;
  double omega1_ge_hz = 0, omega1_es_hz = 0, omega2_ge_hz = 0, omega2_es_hz = 0;
  double g1_ge_hz = 0, g2_ge_hz = 0, gf_a_hz = 0, gf_b_hz = 0;
  double kappa_a_lifetime_s = 0, kappa_b_lifetime_s = 0, kappa_f_lifetime_s = 0;
  double gamma1_ge_lifetime_s = 0, gamma2_ge_lifetime_s = 0;

  int n_max = 2;
  double dt_s = 0.0;
  int output_points = 200;
  int grid_n = 8;
  double t_final_s = 0.0;  // 0: 1.25 x gate time

  std::vector<double> fig3_deltas{5.0, 10.0, 25.0};
  double fig3_gt_min = 0.0;
  double fig3_gt_max = 1.0;
  int fig3_gt_points = 401;

  std::optional<double> fig7_axis_min;
  std::optional<double> fig7_axis_max;
  int fig7_axis_points = 0;  // 0: panel default axis

  double sweep_from_hz = 1e6;
  double sweep_to_hz = 100e6;
  double sweep_step_hz = 1e6;

  std::string experiment;
  std::string out_dir = "out";
  std::string source;  // where it was loaded from

  // Throws ConfigError naming the offending key.
  void validate() const;
  // Sorted "key = value" lines of every effective setting.
  std::string canonical_echo() const;
};

/// Parses the flat `key = value` format; '#' starts a comment.
RunConfig parse_config(std::string_view text, const std::string& origin = "<string>");

/// Loads a file, or a shipped preset when `path_or_preset` names one.
RunConfig load_config(const std::string& path_or_preset);

std::string preset_directory();

DeviceParams to_device_params(const RunConfig& cfg);
SimulationControls to_controls(const RunConfig& cfg);

}  // namespace darkgate
