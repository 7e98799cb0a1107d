#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "darkgate/hilbert.hpp"

namespace darkgate {

/// Device parameters, all angular (rad/s) or rates (1/s).
///
/// The es-transition couplings, es relaxation and pure dephasing are slaved to
/// the stored ge quantities: g_es = sqrt(2) g_ge, gamma_es = 2 gamma_ge and
/// gamma_phi_e = gamma_phi_s = gamma_ge.
struct DeviceParams {
  double omega_a = 0.0;
  double omega_b = 0.0;
  double omega_f = 0.0;
  double omega1_ge = 0.0;
  double omega1_es = 0.0;
  double omega2_ge = 0.0;
  double omega2_es = 0.0;

  double g1_ge = 0.0;
  double g2_ge = 0.0;
  double gf_a = 0.0;
  double gf_b = 0.0;

  double kappa_a = 0.0;
  double kappa_b = 0.0;
  double kappa_f = 0.0;
  double gamma1_ge = 0.0;
  double gamma2_ge = 0.0;

  double g1_es() const { return std::sqrt(2.0) * g1_ge; }
  double g2_es() const { return std::sqrt(2.0) * g2_ge; }
  double gamma1_es() const { return 2.0 * gamma1_ge; }
  double gamma2_es() const { return 2.0 * gamma2_ge; }
  double gamma1_phi() const { return gamma1_ge; }
  double gamma2_phi() const { return gamma2_ge; }

  double anharmonicity1() const { return omega1_ge - omega1_es; }
  double anharmonicity2() const { return omega2_ge - omega2_es; }

  // Throws DomainError on negative or non-finite entries.
  void validate() const;
};

/// The all-resonance working point: omega1_ge = omega2_es = omega_a = omega_b = omega_f.
struct OperatingPoint {
  double omega = kTwoPi * 6e9;
  double g1_ge = kTwoPi * 8e6;
  double g2_es_over_g1 = std::sqrt(3.0);
  double line_ratio = 25.0;                // gf / g1_ge
  double anharmonicity = kTwoPi * 720e6;   // both qutrits
  double lifetime = 50e-6;                 // 1/gamma_ge = 1/kappa; <= 0 or inf -> lossless
};

DeviceParams make_device(const OperatingPoint& op);

/// Uniform loss: gamma_ge = kappa_{a,b,f} = 1/lifetime (inf or <= 0 means zero).
void set_uniform_lifetime(DeviceParams& p, double lifetime);

namespace site {
inline constexpr std::size_t q1 = 0;
inline constexpr std::size_t q2 = 1;
inline constexpr std::size_t ra = 2;
inline constexpr std::size_t rb = 3;
inline constexpr std::size_t rf = 4;
// Effective spaces: [q1, q2, C].
inline constexpr std::size_t c = 2;
}  // namespace site

/// [q1, q2, r_a, r_b, r_f].
CompositeSpace device_space(const DeviceParams& p, int n_max);
/// [q1, q2, C] with C = (a - b)/sqrt(2).
CompositeSpace effective_space(const DeviceParams& p, int n_max);

struct HamiltonianTerm {
  std::string label;
  Complex coefficient;
  OperatorMatrix op;
  double detuning = 0.0;  // rad/s
  bool paired = true;     // adds the Hermitian conjugate
};

/// Sum of c * op * exp(i detuning t) (+ h.c. when paired).
class Hamiltonian {
 public:
  Hamiltonian() = default;
  explicit Hamiltonian(CompositeSpace space) : space_(std::move(space)) {}

  // coefficient * op * e^{i detuning t} + h.c.
  void add_exchange(std::string label, Complex coefficient, OperatorMatrix op, double detuning);
  // A Hermitian time-independent term.
  void add_static(std::string label, double coefficient, OperatorMatrix op);

  const CompositeSpace& space() const { return space_; }
  const std::vector<HamiltonianTerm>& terms() const { return terms_; }
  Index dim() const { return space_.dim(); }

  bool is_time_independent() const;
  Matrix at(double t) const;
  // Terms with zero detuning, evaluated once.
  Matrix static_part() const;
  // Same terms with every detuning forced to zero.
  Hamiltonian without_detunings() const;
  // Drops every term that carries a nonzero detuning.
  Hamiltonian without_detuned_terms() const;
  const HamiltonianTerm* find(const std::string& label) const;

  Hamiltonian& operator+=(const Hamiltonian& other);
  friend Hamiltonian operator+(Hamiltonian a, const Hamiltonian& b) { return a += b; }

 private:
  CompositeSpace space_;
  std::vector<HamiltonianTerm> terms_;
};

struct LindbladChannel {
  std::string label;
  double rate = 0.0;
  OperatorMatrix op;

  LindbladChannel(std::string label, double rate, OperatorMatrix op);
};

/// Lab-frame two-level-qubit device: bare energies plus ge couplings and line exchange.
Hamiltonian build_lab_qubit_hamiltonian(const DeviceParams& p, const CompositeSpace& space);
/// The same device in the interaction picture of its bare energies.
Hamiltonian build_interaction_qubit_hamiltonian(const DeviceParams& p, const CompositeSpace& space);

/// Interaction-picture qutrit Hamiltonian with all six exchange terms.
Hamiltonian build_h2q(const DeviceParams& p, const CompositeSpace& space);
/// Only the g1_ge, g2_es and line terms; static at all-resonance.
Hamiltonian build_h2q_resonant(const DeviceParams& p, const CompositeSpace& space);
/// The dispersive q1-es / r_a and q2-ge / r_b terms dropped by build_h2q_resonant.
Hamiltonian build_unresonant_corrections(const DeviceParams& p, const CompositeSpace& space);

/// Dark-mode Hamiltonian on [q1, q2, C] using the ge transitions of both qutrits.
Hamiltonian build_heff(const DeviceParams& p, const CompositeSpace& small);
/// Dark-mode Hamiltonian with q1 ge and q2 es transitions.
Hamiltonian build_heff_prime(const DeviceParams& p, const CompositeSpace& small);

std::vector<LindbladChannel> build_lindblad_channels(const DeviceParams& p,
                                                     const CompositeSpace& space);

}  // namespace darkgate
