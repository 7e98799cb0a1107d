#include "darkgate/analysis.hpp"

#include <cmath>

#include "darkgate/parallel.hpp"

namespace darkgate {
namespace {

const Complex kI(0.0, 1.0);

std::array<Index, 4> computational_indices(const CompositeSpace& space) {
  std::array<Index, 4> idx{};
  const int q1[4] = {0, 0, 1, 1}, q2[4] = {0, 1, 0, 1};
  for (int k = 0; k < 4; ++k) {
    std::vector<int> labels(space.size(), 0);
    labels[site::q1] = q1[k];
    labels[site::q2] = q2[k];
    idx[k] = space.index_of(labels);
  }
  return idx;
}

Eigen::Matrix4cd computational_block(const Matrix& rho, const std::array<Index, 4>& idx) {
  Eigen::Matrix4cd b;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) b(i, j) = rho(idx[i], idx[j]);
  return b;
}

Eigen::Vector4d theta_amplitudes(double t1, double t2) {
  const double c1 = std::cos(t1), s1 = std::sin(t1), c2 = std::cos(t2), s2 = std::sin(t2);
  return {c1 * c2, c1 * s2, s1 * c2, s1 * s2};
}

}  // namespace

BasisLabel parse_basis_label(const std::string& s) {
  if (s == "gg") return BasisLabel::GG;
  if (s == "ge") return BasisLabel::GE;
  if (s == "eg") return BasisLabel::EG;
  if (s == "ee") return BasisLabel::EE;
  throw DomainError("unknown basis label '" + s + "' (expected gg, ge, eg or ee)");
}

const char* to_string(BasisLabel b) {
  switch (b) {
    case BasisLabel::GG: return "gg";
    case BasisLabel::GE: return "ge";
    case BasisLabel::EG: return "eg";
    case BasisLabel::EE: return "ee";
  }
  return "?";
}

QuantumState analytic_evolution(BasisLabel basis, const DeviceParams& p, double t, int n_max) {
  const CompositeSpace space = effective_space(p, n_max);
  auto ket = [&](int a, int b, int c) { return basis_ket({a, b, c}, space).vector(); };
  const double g1 = p.g1_ge, g2 = p.g2_es();

  switch (basis) {
    case BasisLabel::GG: return QuantumState::ket(ket(0, 0, 0));
    case BasisLabel::GE: return QuantumState::ket(ket(0, 1, 0));
    case BasisLabel::EG: {
      const double phase = g1 / std::sqrt(2.0) * t;
      return QuantumState::ket(std::cos(phase) * ket(1, 0, 0) - kI * std::sin(phase) * ket(0, 0, 1));
    }
    case BasisLabel::EE: {
      const double big_g = g1 * g1 + g2 * g2;
      if (big_g == 0.0) return QuantumState::ket(ket(1, 1, 0));
      const double c = std::cos(std::sqrt(big_g / 2.0) * t), s = std::sin(std::sqrt(big_g / 2.0) * t);
      Vector v = ((g2 * g2 + g1 * g1 * c) / big_g) * ket(1, 1, 0) - (g1 * g2 / big_g * (c - 1.0)) * ket(0, 2, 0) -
                 (kI * g1 / std::sqrt(big_g) * s) * ket(0, 1, 1);
      return QuantumState::ket(std::move(v));
    }
  }
  throw DomainError("unknown basis label");
}

GateTiming gate_timing(int k, int m, double g1_ge) {
  if (k < 1 || m < 1) throw DomainError("gate_timing: k and m must be >= 1");
  if (!(g1_ge > 0.0) || !std::isfinite(g1_ge)) throw DomainError("gate_timing: g1_ge must be > 0");
  const double odd = 2.0 * k - 1.0, even = 2.0 * m;
  if (even <= odd) throw DomainError("gate_timing: no real solution for 2m <= 2k-1");
  GateTiming gt;
  gt.k = k;
  gt.m = m;
  gt.t_gate = std::sqrt(2.0) * odd * kPi / g1_ge;
  gt.g2_es_required = g1_ge * std::sqrt((even / odd) * (even / odd) - 1.0);
  return gt;
}

double state_fidelity_pure(const QuantumState& target, const QuantumState& actual) {
  if (target.dim() != actual.dim()) throw DimensionError("fidelity: dimension mismatch");
  return std::norm(target.vector().dot(actual.vector()));
}

double state_fidelity_mixed(const QuantumState& target, const QuantumState& rho) {
  if (target.dim() != rho.dim()) throw DimensionError("fidelity: dimension mismatch");
  const Matrix& m = rho.matrix();
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (hermiticity_defect(m) > 1e-10 * scale) throw DomainError("fidelity: density matrix is not Hermitian");
  const Vector& v = target.vector();
  return v.dot(m * v).real();
}

std::array<QuantumState, 4> computational_kets(const CompositeSpace& space) {
  const auto idx = computational_indices(space);
  auto make = [&](Index i) {
    Vector v = Vector::Zero(space.dim());
    v(i) = 1.0;
    return QuantumState::ket(std::move(v));
  };
  return {make(idx[0]), make(idx[1]), make(idx[2]), make(idx[3])};
}

QuantumState psi_max(const CompositeSpace& space) {
  const auto k = computational_kets(space);
  return QuantumState::ket(0.5 * (k[0].vector() + k[1].vector() + k[2].vector() + k[3].vector()));
}

QuantumState psi_max_cphase(const CompositeSpace& space) {
  const auto k = computational_kets(space);
  return QuantumState::ket(0.5 * (k[0].vector() + k[1].vector() - k[2].vector() + k[3].vector()));
}

double leakage(const QuantumState& state, const CompositeSpace& space) {
  const auto idx = computational_indices(space);
  double inside = 0.0;
  for (Index i : idx)
    inside += state.is_ket() ? std::norm(state.vector()(i)) : state.matrix()(i, i).real();
  return std::max(0.0, state.trace() - inside);
}

GateChannel GateChannel::from_unitary(const Eigen::Matrix4cd& u) {
  GateChannel ch;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) ch.image[i][j] = u.col(i) * u.col(j).adjoint();
  return ch;
}

double GateChannel::mean_leakage() const {
  double kept = 0.0;
  for (int i = 0; i < 4; ++i) kept += image[i][i].trace().real();
  return 1.0 - kept / 4.0;
}

GateChannel lindblad_gate_channel(const DeviceParams& p, double t, int n_max, const PropagationOptions& opts) {
  const CompositeSpace space = device_space(p, n_max);
  const Hamiltonian h = build_h2q_resonant(p, space) + build_unresonant_corrections(p, space);
  const auto channels = build_lindblad_channels(p, space);
  const auto kets = computational_kets(space);
  const auto idx = computational_indices(space);

  // Valid density matrices spanning every |i><j|:
  //   |i><j| = P+ + i P+i - (1+i)/2 (|i><i| + |j><j|)
  // with P+ built from (|i> + |j>)/sqrt2 and P+i from (|i> + i|j>)/sqrt2.
  struct Job {
    int i, j, kind;  // 0: diagonal, 1: P+, 2: P+i
  };
  std::vector<Job> jobs;
  for (int i = 0; i < 4; ++i) jobs.push_back({i, i, 0});
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      jobs.push_back({i, j, 1});
      jobs.push_back({i, j, 2});
    }
  const std::vector<double> times{t};
  const auto blocks = parallel_map(jobs.size(), [&](std::size_t n) {
    const Job& job = jobs[n];
    Vector v = kets[job.i].vector();
    if (job.kind == 1) v = (v + kets[job.j].vector()) / std::sqrt(2.0);
    if (job.kind == 2) v = (v + kI * kets[job.j].vector()) / std::sqrt(2.0);
    const auto rho0 = QuantumState::density(v * v.adjoint());
    if (t == 0.0) return computational_block(rho0.matrix(), idx);
    const Trajectory traj = propagate_lindblad(h, channels, rho0, times, opts);
    return computational_block(traj.final_state().matrix(), idx);
  });

  GateChannel ch;
  std::array<Eigen::Matrix4cd, 4> diag;
  for (std::size_t n = 0; n < 4; ++n) diag[jobs[n].i] = blocks[n];
  for (int i = 0; i < 4; ++i) ch.image[i][i] = diag[i];
  for (std::size_t n = 4; n < jobs.size(); n += 2) {
    const int i = jobs[n].i, j = jobs[n].j;
    const Eigen::Matrix4cd ij = blocks[n] + kI * blocks[n + 1] - 0.5 * Complex(1.0, 1.0) * (diag[i] + diag[j]);
    ch.image[i][j] = ij;
    ch.image[j][i] = ij.adjoint();
  }
  return ch;
}

double average_gate_fidelity(const GateChannel& channel, int grid_n) {
  if (grid_n < 4) throw DomainError("average_gate_fidelity: grid_n must be >= 4");
  const Eigen::Matrix4cd u = ideal_cphase();
  double sum = 0.0;
  for (int a = 0; a < grid_n; ++a)
    for (int b = 0; b < grid_n; ++b) {
      const double t1 = kTwoPi * a / grid_n, t2 = kTwoPi * b / grid_n;
      const Eigen::Vector4d c = theta_amplitudes(t1, t2);
      Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) rho += (c(i) * c(j)) * channel.image[i][j];
      const Eigen::Vector4cd target = u * c.cast<Complex>();
      sum += target.dot(rho * target).real();
    }
  return sum / (static_cast<double>(grid_n) * grid_n);
}

double average_gate_fidelity(const DeviceParams& p, int grid_n, int n_max, const PropagationOptions& opts) {
  if (grid_n < 4) throw DomainError("average_gate_fidelity: grid_n must be >= 4");
  const double t = gate_timing(1, 1, p.g1_ge).t_gate;
  return average_gate_fidelity(lindblad_gate_channel(p, t, n_max, opts), grid_n);
}

TomographyResult cphase_tomography(const DeviceParams& p, GatePropagator which, double t, int n_max,
                                   const PropagationOptions& opts) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("tomography: time must be finite and >= 0");
  const CompositeSpace space =
      which == GatePropagator::EffectivePrime ? effective_space(p, n_max) : device_space(p, n_max);
  Hamiltonian h = which == GatePropagator::EffectivePrime ? build_heff_prime(p, space)
                  : which == GatePropagator::Resonant     ? build_h2q_resonant(p, space)
                                                          : build_h2q(p, space);
  const auto kets = computational_kets(space);
  const std::vector<double> times{t};

  TomographyResult r;
  r.time = t;
  for (int col = 0; col < 4; ++col) {
    Vector out;
    if (t == 0.0)
      out = kets[col].vector();
    else if (h.is_time_independent())
      out = propagate_static(h, kets[col], t).vector();
    else
      out = propagate_td(h, kets[col], times, opts).final_state().vector();
    double kept = 0.0;
    for (int row = 0; row < 4; ++row) {
      r.matrix(row, col) = kets[row].vector().dot(out);
      kept += std::norm(r.matrix(row, col));
    }
    r.leakage[col] = std::max(0.0, 1.0 - kept);
    if (r.leakage[col] > 0.05) r.degraded = true;
  }
  const double a = std::abs(r.matrix(0, 0));
  if (a > 0.0) r.matrix /= r.matrix(0, 0) / a;
  r.deviation = (r.matrix - ideal_cphase()).cwiseAbs().maxCoeff();
  return r;
}

TomographyResult cphase_tomography(const DeviceParams& p, GatePropagator which, int n_max,
                                   const PropagationOptions& opts) {
  const double t = p.g1_ge > 0.0 ? gate_timing(1, 1, p.g1_ge).t_gate : 0.0;
  return cphase_tomography(p, which, t, n_max, opts);
}

}  // namespace darkgate
