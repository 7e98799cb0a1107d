#pragma once

#include <array>

#include "darkgate/dynamics.hpp"
#include "darkgate/model.hpp"

namespace darkgate {

/// (a, b, f) -> (C+, C-, C):
///   C+ = (a + b + sqrt2 f)/2,  C- = (a + b - sqrt2 f)/2,  C = (a - b)/sqrt2.
/// Rows index the collective modes, columns the bare modes.
struct ModeTransform {
  Eigen::Matrix3cd matrix;

  static ModeTransform canonical();
  Eigen::Matrix3cd inverse() const { return matrix.adjoint(); }
};

enum class BareMode { A, B, F };

/// Coefficients of a bare annihilator over (C+, C-, C).
Eigen::Vector3cd transform_operator(BareMode mode);

/// C+, C-, C as linear combinations of the embedded a, b, f of a device space.
struct CollectiveOperators {
  OperatorMatrix c_plus;
  OperatorMatrix c_minus;
  OperatorMatrix c;
};
CollectiveOperators collective_operators(const CompositeSpace& device);

struct HDoublePrimeCheck {
  // max entrywise |<m|H''|n> - <m|U H' U^dagger|n>| over the subspace, divided by max|H'|.
  double residual_le1 = 0.0;
  double residual_le2 = 0.0;
  double scale = 0.0;  // max|H'| entry (rad/s)
  // Diagonal of H'' on the one-photon states (C-, C, C+), rad/s.
  std::array<double, 3> collective_frequencies{};
};

/// Builds H'' directly in the collective Fock basis and compares it with the
/// lab-frame H' conjugated into that basis. Requires all-resonance and gf_a == gf_b.
HDoublePrimeCheck verify_h_double_prime(const DeviceParams& p, int n_max = 2);

struct ModePopulations {
  double c_plus = 0.0;
  double c_minus = 0.0;
  double c = 0.0;
  double f = 0.0;
};

ModePopulations mode_populations(const QuantumState& state, const CompositeSpace& device);

}  // namespace darkgate
