#pragma once

#include <span>
#include <vector>

#include "darkgate/model.hpp"
#include "darkgate/state.hpp"

namespace darkgate {

struct PropagationOptions {
  double dt = 0.0;            // 0 selects the largest admissible step
  int output_points = 200;    // uniform grid including t = 0 and t_final
  bool restrict_to_reachable = true;
};

/// Basis indices reachable from `seed` through the couplings of H and the channels.
///
/// Every term only connects indices inside the returned set to indices inside
/// it, so propagating on the set is exact.
std::vector<Index> reachable_support(const Hamiltonian& h, std::span<const LindbladChannel> channels,
                                     std::span<const Index> seed);

/// max|detuning| + spectral norm of the static part, restricted to `support`.
double fastest_frequency(const Hamiltonian& h, std::span<const Index> support);

/// Largest step satisfying dt <= 1 / (50 * fastest_frequency).
double max_stable_dt(const Hamiltonian& h, std::span<const Index> support);

/// psi(t) = exp(-iHt) psi0 (or U rho U^dagger) by Hermitian eigendecomposition.
QuantumState propagate_static(const Hamiltonian& h, const QuantumState& psi0, double t);

/// Fixed-step RK4 for i d/dt psi = H(t) psi, sampled at `times` (ascending, >= 0).
Trajectory propagate_td(const Hamiltonian& h, const QuantumState& psi0, std::span<const double> times,
                        const PropagationOptions& opts = {});
Trajectory propagate_td(const Hamiltonian& h, const QuantumState& psi0, double t_final, double dt,
                        int output_points = 200);

/// Fixed-step RK4 for d rho/dt = -i[H, rho] + sum rate D[L] rho.
Trajectory propagate_lindblad(const Hamiltonian& h, std::span<const LindbladChannel> channels,
                              const QuantumState& rho0, std::span<const double> times,
                              const PropagationOptions& opts = {});
Trajectory propagate_lindblad(const Hamiltonian& h, std::span<const LindbladChannel> channels,
                              const QuantumState& rho0, double t_final, double dt,
                              int output_points = 200);

/// <psi|A|psi> or tr(A rho) for Hermitian A.
double expectation(const OperatorMatrix& op, const QuantumState& state);

/// Appends the expectation of `op` at every sample as observable `name`.
void record_observable(Trajectory& traj, const std::string& name, const OperatorMatrix& op);

std::vector<double> uniform_times(double t_final, int points);

}  // namespace darkgate
