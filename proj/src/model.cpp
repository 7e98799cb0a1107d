#include "darkgate/model.hpp"

#include <limits>

namespace darkgate {
namespace {

void require_nonnegative(double v, const char* name) {
  if (!std::isfinite(v) || v < 0.0)
    throw DomainError(std::string("device parameter '") + name + "' must be finite and >= 0");
}

struct QutritOps {
  OperatorMatrix lower_ge, lower_es, proj_e, proj_s;
};

QutritOps qutrit_ops(std::size_t s, const CompositeSpace& space) {
  return {embed(qutrit_lowering(Transition::GE), s, space),
          embed(qutrit_lowering(Transition::ES), s, space), embed(qutrit_projector(1), s, space),
          embed(qutrit_projector(2), s, space)};
}

OperatorMatrix boson_op(std::size_t s, const CompositeSpace& space) {
  return embed(boson_annihilation(space.mode(s).n_max), s, space);
}

void require_layout(const CompositeSpace& space, std::size_t n_modes, const char* what) {
  if (space.size() != n_modes) throw DimensionError(std::string(what) + ": unexpected space layout");
  for (std::size_t i = 0; i < 2; ++i)
    if (space.mode(i).kind != ModeSpec::Kind::Qutrit)
      throw DimensionError(std::string(what) + ": sites 0 and 1 must be qutrits");
  for (std::size_t i = 2; i < n_modes; ++i)
    if (space.mode(i).kind != ModeSpec::Kind::Boson)
      throw DimensionError(std::string(what) + ": expected a bosonic mode at site " +
                           std::to_string(i));
}

// f^+ a and f^+ b exchange, detuned by omega_f - omega_r in the interaction picture.
void add_line_terms(Hamiltonian& h, const DeviceParams& p, const OperatorMatrix& a,
                    const OperatorMatrix& b, const OperatorMatrix& f, bool interaction) {
  const OperatorMatrix fdag = f.adjoint();
  h.add_exchange("gf_a", p.gf_a, fdag * a, interaction ? p.omega_f - p.omega_a : 0.0);
  h.add_exchange("gf_b", p.gf_b, fdag * b, interaction ? p.omega_f - p.omega_b : 0.0);
}

}  // namespace

void DeviceParams::validate() const {
  require_nonnegative(omega_a, "omega_a");
  require_nonnegative(omega_b, "omega_b");
  require_nonnegative(omega_f, "omega_f");
  require_nonnegative(omega1_ge, "omega1_ge");
  require_nonnegative(omega1_es, "omega1_es");
  require_nonnegative(omega2_ge, "omega2_ge");
  require_nonnegative(omega2_es, "omega2_es");
  require_nonnegative(g1_ge, "g1_ge");
  require_nonnegative(g2_ge, "g2_ge");
  require_nonnegative(gf_a, "gf_a");
  require_nonnegative(gf_b, "gf_b");
  require_nonnegative(kappa_a, "kappa_a");
  require_nonnegative(kappa_b, "kappa_b");
  require_nonnegative(kappa_f, "kappa_f");
  require_nonnegative(gamma1_ge, "gamma1_ge");
  require_nonnegative(gamma2_ge, "gamma2_ge");
}

void set_uniform_lifetime(DeviceParams& p, double lifetime) {
  const double rate = (lifetime > 0.0 && std::isfinite(lifetime)) ? 1.0 / lifetime : 0.0;
  p.kappa_a = p.kappa_b = p.kappa_f = rate;
  p.gamma1_ge = p.gamma2_ge = rate;
}

DeviceParams make_device(const OperatingPoint& op) {
  DeviceParams p;
  p.omega_a = p.omega_b = p.omega_f = op.omega;
  p.omega1_ge = op.omega;
  p.omega1_es = op.omega - op.anharmonicity;
  p.omega2_es = op.omega;
  p.omega2_ge = op.omega + op.anharmonicity;
  p.g1_ge = op.g1_ge;
  p.g2_ge = op.g2_es_over_g1 * op.g1_ge / std::sqrt(2.0);
  p.gf_a = p.gf_b = op.line_ratio * op.g1_ge;
  set_uniform_lifetime(p, op.lifetime);
  p.validate();
  return p;
}

CompositeSpace device_space(const DeviceParams& p, int n_max) {
  return CompositeSpace({ModeSpec::qutrit("q1", p.omega1_ge, p.omega1_es),
                         ModeSpec::qutrit("q2", p.omega2_ge, p.omega2_es),
                         ModeSpec::boson("r_a", p.omega_a, n_max),
                         ModeSpec::boson("r_b", p.omega_b, n_max),
                         ModeSpec::boson("r_f", p.omega_f, n_max)});
}

CompositeSpace effective_space(const DeviceParams& p, int n_max) {
  return CompositeSpace({ModeSpec::qutrit("q1", p.omega1_ge, p.omega1_es),
                         ModeSpec::qutrit("q2", p.omega2_ge, p.omega2_es),
                         ModeSpec::boson("C", p.omega_a, n_max)});
}

// ---------------------------------------------------------------------------

void Hamiltonian::add_exchange(std::string label, Complex coefficient, OperatorMatrix op,
                               double detuning) {
  if (op.dim() != space_.dim()) throw DimensionError("Hamiltonian term '" + label + "': dimension mismatch");
  if (!std::isfinite(detuning)) throw DomainError("Hamiltonian term '" + label + "': bad detuning");
  terms_.push_back({std::move(label), coefficient, std::move(op), detuning, true});
}

void Hamiltonian::add_static(std::string label, double coefficient, OperatorMatrix op) {
  if (op.dim() != space_.dim()) throw DimensionError("Hamiltonian term '" + label + "': dimension mismatch");
  if (!op.is_hermitian()) throw DomainError("static term '" + label + "' is not Hermitian");
  terms_.push_back({std::move(label), Complex(coefficient, 0.0), std::move(op), 0.0, false});
}

bool Hamiltonian::is_time_independent() const {
  for (const auto& t : terms_)
    if (t.detuning != 0.0) return false;
  return true;
}

Matrix Hamiltonian::at(double t) const {
  Matrix h = Matrix::Zero(dim(), dim());
  for (const auto& term : terms_) {
    const Complex c = term.coefficient * std::polar(1.0, term.detuning * t);
    if (term.paired) {
      Matrix x = c * term.op.matrix();
      h += x;
      h += x.adjoint();
    } else {
      h += c * term.op.matrix();
    }
  }
  return h;
}

Matrix Hamiltonian::static_part() const {
  Matrix h = Matrix::Zero(dim(), dim());
  for (const auto& term : terms_) {
    if (term.detuning != 0.0) continue;
    Matrix x = term.coefficient * term.op.matrix();
    h += x;
    if (term.paired) h += x.adjoint();
  }
  return h;
}

Hamiltonian Hamiltonian::without_detunings() const {
  Hamiltonian h(space_);
  h.terms_ = terms_;
  for (auto& t : h.terms_) t.detuning = 0.0;
  return h;
}

Hamiltonian Hamiltonian::without_detuned_terms() const {
  Hamiltonian h(space_);
  for (const auto& t : terms_)
    if (t.detuning == 0.0) h.terms_.push_back(t);
  return h;
}

const HamiltonianTerm* Hamiltonian::find(const std::string& label) const {
  for (const auto& t : terms_)
    if (t.label == label) return &t;
  return nullptr;
}

Hamiltonian& Hamiltonian::operator+=(const Hamiltonian& other) {
  if (terms_.empty() && space_.dim() == 1 && space_.size() == 0) space_ = other.space_;
  if (other.dim() != dim()) throw DimensionError("cannot add Hamiltonians on different spaces");
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  return *this;
}

LindbladChannel::LindbladChannel(std::string label_, double rate_, OperatorMatrix op_)
    : label(std::move(label_)), rate(rate_), op(std::move(op_)) {
  if (!std::isfinite(rate) || rate < 0.0)
    throw DomainError("Lindblad channel '" + label + "': rate must be finite and >= 0");
}

// ---------------------------------------------------------------------------

Hamiltonian build_lab_qubit_hamiltonian(const DeviceParams& p, const CompositeSpace& space) {
  require_layout(space, 5, "build_lab_qubit_hamiltonian");
  p.validate();
  const auto a = boson_op(site::ra, space), b = boson_op(site::rb, space),
             f = boson_op(site::rf, space);
  const auto q1 = qutrit_ops(site::q1, space), q2 = qutrit_ops(site::q2, space);

  Hamiltonian h(space);
  h.add_static("omega_a", p.omega_a, a.adjoint() * a);
  h.add_static("omega_b", p.omega_b, b.adjoint() * b);
  h.add_static("omega_f", p.omega_f, f.adjoint() * f);
  h.add_static("omega1", p.omega1_ge, q1.proj_e);
  h.add_static("omega2", p.omega2_ge, q2.proj_e);
  // The s levels are uncoupled; they keep their bare energies.
  h.add_static("omega1_s", p.omega1_ge + p.omega1_es, q1.proj_s);
  h.add_static("omega2_s", p.omega2_ge + p.omega2_es, q2.proj_s);
  h.add_exchange("g1", p.g1_ge, a * q1.lower_ge.adjoint(), 0.0);
  h.add_exchange("g2", p.g2_ge, b * q2.lower_ge.adjoint(), 0.0);
  add_line_terms(h, p, a, b, f, false);
  return h;
}

Hamiltonian build_interaction_qubit_hamiltonian(const DeviceParams& p, const CompositeSpace& space) {
  require_layout(space, 5, "build_interaction_qubit_hamiltonian");
  p.validate();
  const auto a = boson_op(site::ra, space), b = boson_op(site::rb, space),
             f = boson_op(site::rf, space);
  const auto q1 = qutrit_ops(site::q1, space), q2 = qutrit_ops(site::q2, space);

  Hamiltonian h(space);
  h.add_exchange("g1", p.g1_ge, a * q1.lower_ge.adjoint(), p.omega1_ge - p.omega_a);
  h.add_exchange("g2", p.g2_ge, b * q2.lower_ge.adjoint(), p.omega2_ge - p.omega_b);
  add_line_terms(h, p, a, b, f, true);
  return h;
}

Hamiltonian build_h2q(const DeviceParams& p, const CompositeSpace& space) {
  require_layout(space, 5, "build_h2q");
  p.validate();
  const auto a = boson_op(site::ra, space), b = boson_op(site::rb, space),
             f = boson_op(site::rf, space);
  const auto q1 = qutrit_ops(site::q1, space), q2 = qutrit_ops(site::q2, space);

  Hamiltonian h(space);
  h.add_exchange("g1_ge", p.g1_ge, a * q1.lower_ge.adjoint(), p.omega1_ge - p.omega_a);
  h.add_exchange("g1_es", p.g1_es(), a * q1.lower_es.adjoint(), p.omega1_es - p.omega_a);
  h.add_exchange("g2_ge", p.g2_ge, b * q2.lower_ge.adjoint(), p.omega2_ge - p.omega_b);
  h.add_exchange("g2_es", p.g2_es(), b * q2.lower_es.adjoint(), p.omega2_es - p.omega_b);
  add_line_terms(h, p, a, b, f, true);
  return h;
}

Hamiltonian build_h2q_resonant(const DeviceParams& p, const CompositeSpace& space) {
  require_layout(space, 5, "build_h2q_resonant");
  p.validate();
  const auto a = boson_op(site::ra, space), b = boson_op(site::rb, space),
             f = boson_op(site::rf, space);
  const auto q1 = qutrit_ops(site::q1, space), q2 = qutrit_ops(site::q2, space);

  // Detunings are kept as given so that resonance-mismatch scans stay faithful;
  // at all-resonance every one of them is zero.
  Hamiltonian h(space);
  h.add_exchange("g1_ge", p.g1_ge, a * q1.lower_ge.adjoint(), p.omega1_ge - p.omega_a);
  h.add_exchange("g2_es", p.g2_es(), b * q2.lower_es.adjoint(), p.omega2_es - p.omega_b);
  add_line_terms(h, p, a, b, f, true);
  return h;
}

Hamiltonian build_unresonant_corrections(const DeviceParams& p, const CompositeSpace& space) {
  require_layout(space, 5, "build_unresonant_corrections");
  p.validate();
  const auto a = boson_op(site::ra, space), b = boson_op(site::rb, space);
  const auto q1 = qutrit_ops(site::q1, space), q2 = qutrit_ops(site::q2, space);

  Hamiltonian h(space);
  h.add_exchange("g1_es", p.g1_es(), a * q1.lower_es.adjoint(), p.omega1_es - p.omega_a);
  h.add_exchange("g2_ge", p.g2_ge, b * q2.lower_ge.adjoint(), p.omega2_ge - p.omega_b);
  return h;
}

Hamiltonian build_heff(const DeviceParams& p, const CompositeSpace& small) {
  require_layout(small, 3, "build_heff");
  const auto c = boson_op(site::c, small);
  const auto q1 = qutrit_ops(site::q1, small), q2 = qutrit_ops(site::q2, small);
  const double s = 1.0 / std::sqrt(2.0);

  Hamiltonian h(small);
  h.add_exchange("g1", s * p.g1_ge, c * q1.lower_ge.adjoint(), 0.0);
  h.add_exchange("g2", -s * p.g2_ge, c * q2.lower_ge.adjoint(), 0.0);
  return h;
}

Hamiltonian build_heff_prime(const DeviceParams& p, const CompositeSpace& small) {
  require_layout(small, 3, "build_heff_prime");
  const auto c = boson_op(site::c, small);
  const auto q1 = qutrit_ops(site::q1, small), q2 = qutrit_ops(site::q2, small);
  const double s = 1.0 / std::sqrt(2.0);

  Hamiltonian h(small);
  h.add_exchange("g1_ge", s * p.g1_ge, c * q1.lower_ge.adjoint(), 0.0);
  h.add_exchange("g2_es", -s * p.g2_es(), c * q2.lower_es.adjoint(), 0.0);
  return h;
}

std::vector<LindbladChannel> build_lindblad_channels(const DeviceParams& p,
                                                     const CompositeSpace& space) {
  require_layout(space, 5, "build_lindblad_channels");
  p.validate();
  std::vector<LindbladChannel> ch;
  ch.emplace_back("kappa_a", p.kappa_a, boson_op(site::ra, space));
  ch.emplace_back("kappa_b", p.kappa_b, boson_op(site::rb, space));
  ch.emplace_back("kappa_f", p.kappa_f, boson_op(site::rf, space));

  const double ge[2] = {p.gamma1_ge, p.gamma2_ge};
  const double es[2] = {p.gamma1_es(), p.gamma2_es()};
  const double phi[2] = {p.gamma1_phi(), p.gamma2_phi()};
  for (std::size_t l = 0; l < 2; ++l) {
    const auto q = qutrit_ops(l == 0 ? site::q1 : site::q2, space);
    const std::string tag = std::to_string(l + 1);
    ch.emplace_back("gamma" + tag + "_ge", ge[l], q.lower_ge);
    ch.emplace_back("gamma" + tag + "_es", es[l], q.lower_es);
    // Projectors, so D[P] coincides with P rho P - {P, rho}/2.
    ch.emplace_back("gamma" + tag + "_phi_e", phi[l], q.proj_e);
    ch.emplace_back("gamma" + tag + "_phi_s", phi[l], q.proj_s);
  }
  return ch;
}

}  // namespace darkgate
