#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "darkgate/model.hpp"

namespace darkgate {

struct CheckResult {
  std::string name;
  bool passed = false;
  double value = 0.0;      // worst observed defect
  double tolerance = 0.0;
  std::string detail;
};

struct CheckReport {
  std::vector<CheckResult> results;

  bool all_passed() const;
  std::string summary() const;
};

/// Closed-form dark-mode evolution against propagate_static under H_eff' at
/// `samples` random times in [0, 2 t_gate]: populations to 1e-10, fidelity to 1e-9.
CheckResult analytic_oracle_check(const DeviceParams& p, int n_max = 2, int samples = 20,
                                  std::uint64_t seed = 0x5eed5eedULL);

/// Copy of `p` with every mode and the q1-ge / q2-ge transitions on omega_a and gf_b = gf_a.
DeviceParams resonant_copy(const DeviceParams& p);

/// Operator algebra, builder Hermiticity, normal-mode residuals, the analytic
/// oracle, gate-timing algebra and a short Lindblad hygiene run.
CheckReport run_self_checks(const DeviceParams& p, int n_max = 2);

}  // namespace darkgate
