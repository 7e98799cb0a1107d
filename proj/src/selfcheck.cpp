#include "darkgate/selfcheck.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "darkgate/analysis.hpp"
#include "darkgate/dynamics.hpp"
#include "darkgate/normal_modes.hpp"

namespace darkgate {
namespace {

CheckResult make(std::string name, double value, double tol, std::string detail = {}) {
  return {std::move(name), value <= tol, value, tol, std::move(detail)};
}

double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

// Total excitation number: qutrit level plus photon number on every mode.
OperatorMatrix excitation_number(const CompositeSpace& space) {
  Matrix n = Matrix::Zero(space.dim(), space.dim());
  for (std::size_t s = 0; s < space.size(); ++s) {
    if (space.mode(s).kind == ModeSpec::Kind::Qutrit) {
      n += embed(qutrit_projector(1), s, space).matrix() + 2.0 * embed(qutrit_projector(2), s, space).matrix();
    } else {
      const auto a = boson_annihilation(space.mode(s).n_max);
      n += embed(a.adjoint() * a, s, space).matrix();
    }
  }
  return OperatorMatrix(std::move(n));
}

CheckResult commutator_check(int n_max) {
  const auto a = boson_annihilation(n_max);
  Matrix expected = Matrix::Identity(n_max + 1, n_max + 1);
  expected(n_max, n_max) = -double(n_max);
  return make("truncated [a, a^dagger]", max_abs(commutator(a, a.adjoint()).matrix() - expected), 1e-14);
}

CheckResult qutrit_algebra_check() {
  Matrix sum = Matrix::Zero(3, 3);
  for (int l = 0; l < 3; ++l) sum += qutrit_projector(l).matrix();
  double defect = max_abs(sum - Matrix::Identity(3, 3));
  const auto ge = qutrit_lowering(Transition::GE), es = qutrit_lowering(Transition::ES);
  defect = std::max(defect, max_abs((ge * ge.adjoint()).matrix() - qutrit_projector(0).matrix()));
  defect = std::max(defect, max_abs((es * es.adjoint()).matrix() - qutrit_projector(1).matrix()));
  defect = std::max(defect, max_abs((ge.adjoint() * ge).matrix() - qutrit_projector(1).matrix()));
  return make("qutrit projector completeness", defect, 1e-14);
}

CheckResult embed_check(const DeviceParams& p, int n_max) {
  const CompositeSpace space = device_space(p, n_max);
  double defect = 0.0;
  const auto a = embed(boson_annihilation(n_max), site::ra, space);
  const auto b = embed(boson_annihilation(n_max), site::rb, space);
  const auto s1 = embed(qutrit_lowering(Transition::GE), site::q1, space);
  const auto s2 = embed(qutrit_lowering(Transition::ES), site::q2, space);
  defect = std::max(defect, max_abs(commutator(a, b.adjoint()).matrix()));
  defect = std::max(defect, max_abs(commutator(a, s1).matrix()));
  defect = std::max(defect, max_abs(commutator(s1, s2.adjoint()).matrix()));
  return make("embedded operators on distinct sites commute", defect, 1e-14);
}

CheckResult hermiticity_check(const DeviceParams& p, int n_max) {
  const CompositeSpace space = device_space(p, n_max);
  const Hamiltonian h = build_h2q(p, space);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1e-6);
  double worst = 0.0;
  for (int i = 0; i < 5; ++i) {
    const Matrix m = h.at(u(rng));
    worst = std::max(worst, hermiticity_defect(m) / std::max(1.0, max_abs(m)));
  }
  return make("H_2q(t) Hermitian at random times", worst, 1e-14);
}

CheckResult excitation_check(const DeviceParams& p, int n_max) {
  const CompositeSpace small = effective_space(p, n_max);
  const Matrix h = build_heff_prime(p, small).at(0.0);
  const Matrix n = excitation_number(small).matrix();
  const double defect = max_abs(h * n - n * h) / std::max(1.0, max_abs(h));
  return make("[H_eff', N] = 0", defect, 1e-14);
}

std::string fmt_g(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

}  // namespace

bool CheckReport::all_passed() const {
  return std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.passed; });
}

std::string CheckReport::summary() const {
  std::string out;
  for (const auto& r : results) {
    out += (r.passed ? "PASS  " : "FAIL  ") + r.name + "  (" + fmt_g(r.value) + " <= " + fmt_g(r.tolerance) + ")";
    if (!r.detail.empty()) out += "  " + r.detail;
    out += "\n";
  }
  return out;
}

DeviceParams resonant_copy(const DeviceParams& p) {
  DeviceParams q = p;
  q.omega_b = q.omega_f = q.omega1_ge = q.omega2_ge = p.omega_a;
  q.gf_b = p.gf_a;
  return q;
}

CheckResult analytic_oracle_check(const DeviceParams& p, int n_max, int samples, std::uint64_t seed) {
  if (!(p.g1_ge > 0.0)) return make("analytic oracle vs propagate_static", 0.0, 1e-10, "skipped: g1_ge = 0");
  const CompositeSpace small = effective_space(p, n_max);
  const Hamiltonian h = build_heff_prime(p, small);
  const double t_gate = gate_timing(1, 1, p.g1_ge).t_gate;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 2.0 * t_gate);
  double pop_defect = 0.0, fid_defect = 0.0;
  const int labels[4][3] = {{0, 0, 0}, {0, 1, 0}, {1, 0, 0}, {1, 1, 0}};
  for (int i = 0; i < samples; ++i) {
    const double t = u(rng);
    for (int b = 0; b < 4; ++b) {
      const auto basis = static_cast<BasisLabel>(b);
      const QuantumState expected = analytic_evolution(basis, p, t, n_max);
      const QuantumState numeric =
          propagate_static(h, basis_ket({labels[b][0], labels[b][1], labels[b][2]}, small), t);
      const RealVector dp = expected.vector().cwiseAbs2() - numeric.vector().cwiseAbs2();
      pop_defect = std::max(pop_defect, dp.cwiseAbs().maxCoeff());
      fid_defect = std::max(fid_defect, 1.0 - state_fidelity_pure(expected, numeric));
    }
  }
  CheckResult r = make("analytic oracle vs propagate_static", pop_defect, 1e-10,
                       "fidelity defect " + fmt_g(fid_defect));
  r.passed = pop_defect <= 1e-10 && fid_defect <= 1e-9;
  r.value = std::max(pop_defect, fid_defect);
  return r;
}

CheckReport run_self_checks(const DeviceParams& p, int n_max) {
  CheckReport report;
  auto& out = report.results;
  out.push_back(commutator_check(n_max));
  out.push_back(qutrit_algebra_check());
  out.push_back(embed_check(p, n_max));
  out.push_back(hermiticity_check(p, n_max));
  out.push_back(excitation_check(p, n_max));

  const DeviceParams rp = resonant_copy(p);
  const HDoublePrimeCheck hc = verify_h_double_prime(rp, std::max(2, n_max));
  out.push_back(make("H'' residual, excitation <= 1", hc.residual_le1, 1e-10, "relative to max|H'|"));
  out.push_back(make("H'' residual, excitation <= 2", hc.residual_le2, 1e-8, "relative to max|H'|"));
  const double w = rp.omega_a, g = std::sqrt(2.0) * rp.gf_a;
  const double expected[3] = {w - g, w, w + g};
  double spec = 0.0;
  for (int k = 0; k < 3; ++k) spec = std::max(spec, std::abs(hc.collective_frequencies[k] - expected[k]) / w);
  out.push_back(make("single-excitation spectrum {w - sqrt2 g, w, w + sqrt2 g}", spec, 1e-10, "relative to w"));

  out.push_back(analytic_oracle_check(p, n_max));

  const GateTiming gt = gate_timing(1, 1, kTwoPi * 8e6);
  const double timing = std::max(std::abs(gt.g2_es_required / (kTwoPi * 8e6) - std::sqrt(3.0)),
                                 std::abs(8e6 * gt.t_gate - std::sqrt(2.0) / 2.0));
  out.push_back(make("gate timing algebra (k = m = 1)", timing, 1e-12));

  if (p.g1_ge > 0.0) {
    const CompositeSpace space = device_space(p, n_max);
    const Hamiltonian h = build_h2q_resonant(p, space) + build_unresonant_corrections(p, space);
    const auto channels = build_lindblad_channels(p, space);
    const QuantumState rho0 = QuantumState::density(psi_max(space).to_density());
    const Trajectory tr = propagate_lindblad(h, channels, rho0, gate_timing(1, 1, p.g1_ge).t_gate, 0.0, 5);
    out.push_back(make("Lindblad trace preservation", tr.max_trace_error, 1e-8));
    out.push_back(make("Lindblad positivity", std::max(0.0, -tr.min_eigenvalue), 1e-8));
  }
  return report;
}

}  // namespace darkgate
