#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "darkgate/types.hpp"

namespace darkgate {

/// Pure ket or density matrix on a composite space.
template <typename Real>
class BasicQuantumState {
 public:
  enum class Kind { Ket, DensityMatrix };
  using Vec = VectorT<Real>;
  using Mat = MatrixT<Real>;

  static BasicQuantumState ket(Vec psi) {
    BasicQuantumState s;
    s.kind_ = Kind::Ket;
    s.ket_ = std::move(psi);
    return s;
  }

  static BasicQuantumState density(Mat rho) {
    if (rho.rows() != rho.cols()) throw DimensionError("density matrix must be square");
    BasicQuantumState s;
    s.kind_ = Kind::DensityMatrix;
    s.rho_ = std::move(rho);
    return s;
  }

  Kind kind() const { return kind_; }
  bool is_ket() const { return kind_ == Kind::Ket; }
  Index dim() const { return is_ket() ? ket_.size() : rho_.rows(); }

  const Vec& vector() const {
    if (!is_ket()) throw Error("state is a density matrix, not a ket");
    return ket_;
  }
  const Mat& matrix() const {
    if (is_ket()) throw Error("state is a ket, not a density matrix");
    return rho_;
  }

  // |psi><psi| for kets, a copy for density matrices.
  Mat to_density() const { return is_ket() ? Mat(ket_ * ket_.adjoint()) : rho_; }

  Real norm() const { return is_ket() ? ket_.norm() : Real(1); }
  Real trace() const { return is_ket() ? ket_.squaredNorm() : rho_.trace().real(); }

  Real min_eigenvalue() const {
    if (is_ket()) return Real(0);
    Mat h = (rho_ + rho_.adjoint()) / Real(2);
    Eigen::SelfAdjointEigenSolver<Mat> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
  }

  // Ket: |‖psi‖-1| < 1e-9. Density: Hermitian to 1e-10, unit trace to 1e-8, PSD to -1e-8.
  bool is_valid() const {
    if (is_ket()) return std::abs(ket_.norm() - Real(1)) < Real(1e-9);
    if (hermiticity_defect(rho_) > Real(1e-10)) return false;
    if (std::abs(trace() - Real(1)) > Real(1e-8)) return false;
    return min_eigenvalue() > Real(-1e-8);
  }

 private:
  BasicQuantumState() = default;
  Kind kind_ = Kind::Ket;
  Vec ket_;
  Mat rho_;
};

using QuantumState = BasicQuantumState<double>;

/// Sampled propagation output.
///
/// States are stored on `support`, the subset of basis indices of the full
/// space that the dynamics can reach from the initial state; amplitudes outside
/// it are exactly zero. `state(k)` re-embeds into the full space.
struct Trajectory {
  std::vector<double> times;
  std::vector<QuantumState> states;
  std::vector<Index> support;
  Index full_dim = 0;
  std::map<std::string, std::vector<double>> observables;

  // Diagnostics over sampled times.
  double max_norm_error = 0.0;     // kets
  double max_trace_error = 0.0;    // density matrices
  double min_eigenvalue = 0.0;     // density matrices
  double dt_used = 0.0;
  long steps = 0;

  std::size_t size() const { return times.size(); }
  const QuantumState& reduced_state(std::size_t k) const { return states.at(k); }
  QuantumState state(std::size_t k) const;
  const QuantumState& final_reduced() const { return states.back(); }
  QuantumState final_state() const { return state(states.size() - 1); }

  // Restrict a full-space vector/matrix onto the support.
  Vector restrict(const Vector& v) const;
  Matrix restrict(const Matrix& m) const;
};

}  // namespace darkgate
