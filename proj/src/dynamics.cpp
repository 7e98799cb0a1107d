#include "darkgate/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>

namespace darkgate {
namespace {

using SpMat = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;
const Complex kI(0.0, 1.0);

Matrix restrict_matrix(const Matrix& m, std::span<const Index> support) {
  const Index n = static_cast<Index>(support.size());
  Matrix r(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) r(i, j) = m(support[i], support[j]);
  return r;
}

SpMat to_sparse(const Matrix& m) {
  SpMat s = m.sparseView(Complex(0.0), 0.0);
  s.makeCompressed();
  return s;
}

std::vector<Index> state_seed(const QuantumState& s) {
  std::vector<Index> seed;
  if (s.is_ket()) {
    for (Index i = 0; i < s.dim(); ++i)
      if (s.vector()(i) != Complex(0.0)) seed.push_back(i);
  } else {
    const Matrix& m = s.matrix();
    for (Index i = 0; i < s.dim(); ++i)
      if (m.row(i).cwiseAbs().maxCoeff() > 0.0) seed.push_back(i);
  }
  return seed;
}

// Time-dependent generator restricted to an invariant support.
struct CompiledSystem {
  struct Oscillating {
    double detuning;
    SpMat x;
    SpMat xdag;
  };

  std::vector<Index> support;
  Index full_dim = 0;
  SpMat h0;
  std::vector<Oscillating> osc;
  std::vector<SpMat> jumps;      // sqrt(rate) L
  std::vector<SpMat> jumps_dag;
  SpMat decay;                   // sum rate L^dagger L
  double max_dt = std::numeric_limits<double>::infinity();

  CompiledSystem(const Hamiltonian& h, std::span<const LindbladChannel> channels,
                 const QuantumState& initial, bool reduce) {
    full_dim = h.dim();
    if (initial.dim() != full_dim) throw DimensionError("initial state does not match Hamiltonian dimension");
    for (const auto& c : channels)
      if (c.op.dim() != full_dim) throw DimensionError("Lindblad channel '" + c.label + "' dimension mismatch");

    if (reduce) {
      const auto seed = state_seed(initial);
      support = reachable_support(h, channels, seed);
    } else {
      support.resize(full_dim);
      for (Index i = 0; i < full_dim; ++i) support[i] = i;
    }

    h0 = to_sparse(restrict_matrix(h.static_part(), support));
    std::map<double, Matrix> by_detuning;
    for (const auto& t : h.terms()) {
      if (t.detuning == 0.0) continue;
      auto [it, inserted] = by_detuning.try_emplace(t.detuning, Matrix());
      Matrix x = restrict_matrix(t.coefficient * t.op.matrix(), support);
      if (inserted)
        it->second = std::move(x);
      else
        it->second += x;
    }
    for (auto& [d, x] : by_detuning) {
      SpMat sx = to_sparse(x);
      SpMat sxd = to_sparse(x.adjoint());
      osc.push_back({d, std::move(sx), std::move(sxd)});
    }

    const Index n = static_cast<Index>(support.size());
    Matrix decay_dense = Matrix::Zero(n, n);
    for (const auto& c : channels) {
      if (c.rate == 0.0) continue;
      const Matrix l = std::sqrt(c.rate) * restrict_matrix(c.op.matrix(), support);
      jumps.push_back(to_sparse(l));
      jumps_dag.push_back(to_sparse(l.adjoint()));
      decay_dense += l.adjoint() * l;
    }
    decay = to_sparse(decay_dense);

    const double w = fastest_frequency(h, support);
    if (w > 0.0) max_dt = 1.0 / (50.0 * w);
  }

  Index dim() const { return static_cast<Index>(support.size()); }

  Vector ket_rhs(double t, const Vector& y) const {
    Vector out = h0 * y;
    for (const auto& o : osc) {
      const Complex e = std::polar(1.0, o.detuning * t);
      out.noalias() += e * (o.x * y);
      out.noalias() += std::conj(e) * (o.xdag * y);
    }
    return -kI * out;
  }

  // rho is Hermitian at every stage, so -i[H,rho] - {G/2, rho} = A + A^dagger.
  Matrix rho_rhs(double t, const Matrix& rho) const {
    Matrix a = -kI * (h0 * rho);
    a.noalias() -= 0.5 * (decay * rho);
    for (const auto& o : osc) {
      const Complex e = std::polar(1.0, o.detuning * t);
      a.noalias() += (-kI * e) * (o.x * rho);
      a.noalias() += (-kI * std::conj(e)) * (o.xdag * rho);
    }
    Matrix out = a + a.adjoint();
    for (std::size_t k = 0; k < jumps.size(); ++k) {
      Matrix lr = jumps[k] * rho;
      out.noalias() += lr * jumps_dag[k];
    }
    return out;
  }
};

double resolve_dt(const CompiledSystem& sys, double requested) {
  if (requested < 0.0 || !std::isfinite(requested))
    throw DomainError("time step must be finite and > 0");
  if (requested == 0.0) return sys.max_dt;
  if (requested > sys.max_dt * (1.0 + 1e-12))
    throw DomainError("step-size precondition violated: dt = " + std::to_string(requested) +
                      " s exceeds 1/(50 w_max) = " + std::to_string(sys.max_dt) + " s");
  return requested;
}

void check_times(std::span<const double> times) {
  if (times.empty()) throw DomainError("no output times requested");
  double prev = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (!std::isfinite(times[k]) || times[k] < 0.0) throw DomainError("output times must be finite and >= 0");
    if (k > 0 && !(times[k] > prev)) throw DomainError("output times must be strictly increasing");
    prev = times[k];
  }
}

template <typename State, typename Rhs>
long advance(State& y, double& t, double target, double dt, const Rhs& rhs, double& dt_used) {
  const double span = target - t;
  if (span <= 0.0) return 0;
  const long n = std::max(1L, static_cast<long>(std::ceil(span / dt * (1.0 - 1e-12))));
  const double h = span / static_cast<double>(n);
  dt_used = std::max(dt_used, h);
  for (long k = 0; k < n; ++k) {
    const double t0 = t + static_cast<double>(k) * h;
    const State k1 = rhs(t0, y);
    const State k2 = rhs(t0 + 0.5 * h, State(y + (0.5 * h) * k1));
    const State k3 = rhs(t0 + 0.5 * h, State(y + (0.5 * h) * k2));
    const State k4 = rhs(t0 + h, State(y + h * k3));
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if constexpr (std::is_same_v<State, Matrix>) y = (0.5 * (y + y.adjoint())).eval();
  }
  t = target;
  return n;
}

Vector gather(const Vector& v, std::span<const Index> support) {
  Vector r(static_cast<Index>(support.size()));
  for (std::size_t i = 0; i < support.size(); ++i) r(static_cast<Index>(i)) = v(support[i]);
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<Index> reachable_support(const Hamiltonian& h, std::span<const LindbladChannel> channels,
                                     std::span<const Index> seed) {
  const Index n = h.dim();
  std::vector<std::vector<Index>> adj(static_cast<std::size_t>(n));
  auto add_pattern = [&](const Matrix& m, bool symmetric) {
    for (Index j = 0; j < n; ++j)
      for (Index i = 0; i < n; ++i)
        if (m(i, j) != Complex(0.0)) {
          adj[j].push_back(i);
          if (symmetric) adj[i].push_back(j);
        }
  };
  for (const auto& t : h.terms()) add_pattern(t.op.matrix(), true);
  for (const auto& c : channels) {
    if (c.rate == 0.0) continue;
    if (c.op.dim() != n) throw DimensionError("Lindblad channel '" + c.label + "' dimension mismatch");
    add_pattern(c.op.matrix(), false);
    add_pattern(c.op.matrix().adjoint() * c.op.matrix(), true);
  }

  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<Index> stack;
  for (Index s : seed) {
    if (s < 0 || s >= n) throw DomainError("seed index out of range");
    if (!seen[s]) {
      seen[s] = 1;
      stack.push_back(s);
    }
  }
  while (!stack.empty()) {
    const Index v = stack.back();
    stack.pop_back();
    for (Index w : adj[v])
      if (!seen[w]) {
        seen[w] = 1;
        stack.push_back(w);
      }
  }
  std::vector<Index> out;
  for (Index i = 0; i < n; ++i)
    if (seen[i]) out.push_back(i);
  return out;
}

double fastest_frequency(const Hamiltonian& h, std::span<const Index> support) {
  double max_detuning = 0.0;
  for (const auto& t : h.terms()) max_detuning = std::max(max_detuning, std::abs(t.detuning));
  if (support.empty()) return max_detuning;
  const Matrix h0 = restrict_matrix(h.static_part(), support);
  double norm = 0.0;
  if (h0.size() > 0 && h0.cwiseAbs().maxCoeff() > 0.0) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(h0, Eigen::EigenvaluesOnly);
    norm = es.eigenvalues().cwiseAbs().maxCoeff();
  }
  return max_detuning + norm;
}

double max_stable_dt(const Hamiltonian& h, std::span<const Index> support) {
  const double w = fastest_frequency(h, support);
  return w > 0.0 ? 1.0 / (50.0 * w) : std::numeric_limits<double>::infinity();
}

QuantumState propagate_static(const Hamiltonian& h, const QuantumState& psi0, double t) {
  if (!h.is_time_independent()) throw DomainError("propagate_static requires a time-independent Hamiltonian");
  if (psi0.dim() != h.dim()) throw DimensionError("state does not match Hamiltonian dimension");
  const Matrix hm = h.at(0.0);
  const double scale = std::max(1.0, hm.size() ? hm.cwiseAbs().maxCoeff() : 0.0);
  if (hermiticity_defect(hm) > 1e-12 * scale) throw DomainError("Hamiltonian is not Hermitian");

  Eigen::SelfAdjointEigenSolver<Matrix> es(hm);
  const Matrix& v = es.eigenvectors();
  Vector phases(hm.rows());
  for (Index k = 0; k < hm.rows(); ++k) phases(k) = std::polar(1.0, -es.eigenvalues()(k) * t);
  const Matrix u = v * phases.asDiagonal() * v.adjoint();
  if (psi0.is_ket()) return QuantumState::ket(u * psi0.vector());
  return QuantumState::density(u * psi0.matrix() * u.adjoint());
}

Trajectory propagate_td(const Hamiltonian& h, const QuantumState& psi0, std::span<const double> times,
                        const PropagationOptions& opts) {
  if (!psi0.is_ket()) throw DomainError("propagate_td expects a ket");
  check_times(times);
  const CompiledSystem sys(h, {}, psi0, opts.restrict_to_reachable);
  const double dt = resolve_dt(sys, opts.dt);

  Trajectory traj;
  traj.support = sys.support;
  traj.full_dim = sys.full_dim;
  Vector y = gather(psi0.vector(), sys.support);
  const double n0 = y.norm();
  double t = 0.0;
  auto rhs = [&sys](double tt, const Vector& v) { return sys.ket_rhs(tt, v); };
  for (double target : times) {
    const double step = std::isfinite(dt) ? dt : std::max(target - t, 1e-300);
    traj.steps += advance(y, t, target, step, rhs, traj.dt_used);
    traj.times.push_back(target);
    traj.max_norm_error = std::max(traj.max_norm_error, std::abs(y.norm() - n0));
    traj.states.push_back(QuantumState::ket(y));
  }
  return traj;
}

Trajectory propagate_td(const Hamiltonian& h, const QuantumState& psi0, double t_final, double dt,
                        int output_points) {
  const auto times = uniform_times(t_final, output_points);
  return propagate_td(h, psi0, times, PropagationOptions{dt, output_points, true});
}

Trajectory propagate_lindblad(const Hamiltonian& h, std::span<const LindbladChannel> channels,
                              const QuantumState& rho0, std::span<const double> times,
                              const PropagationOptions& opts) {
  if (rho0.is_ket()) throw DomainError("propagate_lindblad expects a density matrix");
  if (!rho0.is_valid()) throw DomainError("initial density matrix is not a valid state");
  check_times(times);
  const CompiledSystem sys(h, channels, rho0, opts.restrict_to_reachable);
  const double dt = resolve_dt(sys, opts.dt);

  Trajectory traj;
  traj.support = sys.support;
  traj.full_dim = sys.full_dim;
  traj.min_eigenvalue = std::numeric_limits<double>::infinity();
  Matrix rho = restrict_matrix(rho0.matrix(), sys.support);
  double t = 0.0;
  auto rhs = [&sys](double tt, const Matrix& r) { return sys.rho_rhs(tt, r); };
  for (double target : times) {
    const double step = std::isfinite(dt) ? dt : std::max(target - t, 1e-300);
    traj.steps += advance(rho, t, target, step, rhs, traj.dt_used);
    traj.times.push_back(target);
    auto s = QuantumState::density(rho);
    traj.max_trace_error = std::max(traj.max_trace_error, std::abs(s.trace() - 1.0));
    traj.min_eigenvalue = std::min(traj.min_eigenvalue, s.min_eigenvalue());
    traj.states.push_back(std::move(s));
  }
  return traj;
}

Trajectory propagate_lindblad(const Hamiltonian& h, std::span<const LindbladChannel> channels,
                              const QuantumState& rho0, double t_final, double dt, int output_points) {
  const auto times = uniform_times(t_final, output_points);
  return propagate_lindblad(h, channels, rho0, times, PropagationOptions{dt, output_points, true});
}

double expectation(const OperatorMatrix& op, const QuantumState& state) {
  if (op.dim() != state.dim()) throw DimensionError("expectation: dimension mismatch");
  if (!op.is_hermitian()) throw DomainError("expectation: operator is not Hermitian");
  const Complex v = state.is_ket() ? state.vector().dot(op.matrix() * state.vector())
                                   : (op.matrix() * state.matrix()).trace();
  const double scale = std::max(1.0, op.matrix().size() ? op.matrix().cwiseAbs().maxCoeff() : 0.0);
  if (std::abs(v.imag()) > 1e-10 * scale) throw Error("expectation: imaginary residue above 1e-10");
  return v.real();
}

void record_observable(Trajectory& traj, const std::string& name, const OperatorMatrix& op) {
  if (op.dim() != traj.full_dim) throw DimensionError("record_observable: dimension mismatch");
  const OperatorMatrix reduced(traj.restrict(op.matrix()));
  auto& series = traj.observables[name];
  series.clear();
  for (const auto& s : traj.states) series.push_back(expectation(reduced, s));
}

std::vector<double> uniform_times(double t_final, int points) {
  if (points < 2) throw DomainError("need at least two output points");
  if (!(t_final > 0.0) || !std::isfinite(t_final)) throw DomainError("t_final must be > 0");
  std::vector<double> t(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k) t[k] = t_final * static_cast<double>(k) / (points - 1);
  return t;
}

// ---------------------------------------------------------------------------

QuantumState Trajectory::state(std::size_t k) const {
  const auto& s = states.at(k);
  if (s.is_ket()) {
    Vector v = Vector::Zero(full_dim);
    for (std::size_t i = 0; i < support.size(); ++i) v(support[i]) = s.vector()(static_cast<Index>(i));
    return QuantumState::ket(std::move(v));
  }
  Matrix m = Matrix::Zero(full_dim, full_dim);
  for (std::size_t j = 0; j < support.size(); ++j)
    for (std::size_t i = 0; i < support.size(); ++i)
      m(support[i], support[j]) = s.matrix()(static_cast<Index>(i), static_cast<Index>(j));
  return QuantumState::density(std::move(m));
}

Vector Trajectory::restrict(const Vector& v) const {
  if (v.size() != full_dim) throw DimensionError("restrict: dimension mismatch");
  return gather(v, support);
}

Matrix Trajectory::restrict(const Matrix& m) const {
  if (m.rows() != full_dim) throw DimensionError("restrict: dimension mismatch");
  return restrict_matrix(m, support);
}

}  // namespace darkgate
