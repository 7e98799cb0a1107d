#pragma once

#include <array>
#include <string>

#include "darkgate/dynamics.hpp"
#include "darkgate/model.hpp"

namespace darkgate {

enum class BasisLabel { GG, GE, EG, EE };

BasisLabel parse_basis_label(const std::string& s);
const char* to_string(BasisLabel b);

/// Closed-form exp(-i H_eff' t) applied to |q1 q2 0_C> on the effective space.
QuantumState analytic_evolution(BasisLabel basis, const DeviceParams& p, double t, int n_max = 2);

/// Gate time and q2 coupling for which |eg0> completes 2k-1 half-periods and
/// |ee0> completes m full periods.
struct GateTiming {
  int k = 1;
  int m = 1;
  double t_gate = 0.0;          // s
  double g2_es_required = 0.0;  // rad/s
};

GateTiming gate_timing(int k, int m, double g1_ge);

double state_fidelity_pure(const QuantumState& target, const QuantumState& actual);
double state_fidelity_mixed(const QuantumState& target, const QuantumState& rho);

/// Computational basis {gg, ge, eg, ee} with every mode in vacuum.
std::array<QuantumState, 4> computational_kets(const CompositeSpace& space);
/// (|gg> + |ge> + |eg> + |ee>)/2 and its c-phase image (|gg> + |ge> - |eg> + |ee>)/2.
QuantumState psi_max(const CompositeSpace& space);
QuantumState psi_max_cphase(const CompositeSpace& space);

/// Population outside the computational subspace.
double leakage(const QuantumState& state, const CompositeSpace& space);

inline Eigen::Matrix4cd ideal_cphase() { return Eigen::Vector4cd(1.0, 1.0, -1.0, 1.0).asDiagonal(); }

/// Computational-block image of every |i><j| under a gate map.
struct GateChannel {
  std::array<std::array<Eigen::Matrix4cd, 4>, 4> image;

  static GateChannel from_unitary(const Eigen::Matrix4cd& u);
  // 1 - mean over basis states of the trace remaining in the block.
  double mean_leakage() const;
};

/// Lindblad evolution of the full device (H_2q with its detuned terms) for time t.
GateChannel lindblad_gate_channel(const DeviceParams& p, double t, int n_max = 2,
                                  const PropagationOptions& opts = {});

/// (1/2pi)^2 int <psi_f|E(psi_0)|psi_f> dtheta1 dtheta2 on a uniform grid_n x grid_n grid.
double average_gate_fidelity(const GateChannel& channel, int grid_n);
/// Same, for the device at its k=m=1 gate time.
double average_gate_fidelity(const DeviceParams& p, int grid_n, int n_max = 2,
                             const PropagationOptions& opts = {});

enum class GatePropagator { EffectivePrime, Resonant, Full };

struct TomographyResult {
  Eigen::Matrix4cd matrix;      // global phase fixed by the gg element
  double deviation = 0.0;       // max |matrix - diag(1,1,-1,1)|
  std::array<double, 4> leakage{};
  bool degraded = false;        // some column leaked more than 0.05
  double time = 0.0;
};

TomographyResult cphase_tomography(const DeviceParams& p, GatePropagator which, double t, int n_max = 2,
                                   const PropagationOptions& opts = {});
/// At the k=m=1 gate time (or t=0 when g1_ge is zero).
TomographyResult cphase_tomography(const DeviceParams& p, GatePropagator which, int n_max = 2,
                                   const PropagationOptions& opts = {});

}  // namespace darkgate
