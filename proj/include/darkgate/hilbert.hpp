#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include <unsupported/Eigen/KroneckerProduct>

#include "darkgate/state.hpp"
#include "darkgate/types.hpp"

namespace darkgate {

/// A single degree of freedom: a three-level transmon or a truncated boson.
struct ModeSpec {
  enum class Kind { Qutrit, Boson };

  Kind kind = Kind::Boson;
  std::string name;
  // Qutrit: transition frequencies g<->e and e<->s (rad/s).
  double omega_ge = 0.0;
  double omega_es = 0.0;
  // Boson: mode frequency (rad/s) and Fock cutoff.
  double omega = 0.0;
  int n_max = 0;

  static ModeSpec qutrit(std::string name, double omega_ge, double omega_es) {
    if (!(omega_ge > 0.0) || !(omega_es > 0.0))
      throw DomainError("qutrit '" + name + "': transition frequencies must be positive");
    ModeSpec m;
    m.kind = Kind::Qutrit;
    m.name = std::move(name);
    m.omega_ge = omega_ge;
    m.omega_es = omega_es;
    return m;
  }

  static ModeSpec boson(std::string name, double omega, int n_max) {
    if (n_max < 1) throw DomainError("boson '" + name + "': n_max must be >= 1");
    if (!(omega > 0.0)) throw DomainError("boson '" + name + "': frequency must be positive");
    ModeSpec m;
    m.kind = Kind::Boson;
    m.name = std::move(name);
    m.omega = omega;
    m.n_max = n_max;
    return m;
  }

  Index dim() const { return kind == Kind::Qutrit ? 3 : n_max + 1; }
};

/// Ordered tensor product of modes, row-major (first mode is most significant).
class CompositeSpace {
 public:
  CompositeSpace() = default;
  explicit CompositeSpace(std::vector<ModeSpec> modes) : modes_(std::move(modes)) {
    dim_ = 1;
    for (const auto& m : modes_) dim_ *= m.dim();
  }

  const std::vector<ModeSpec>& modes() const { return modes_; }
  const ModeSpec& mode(std::size_t site) const { return modes_.at(site); }
  std::size_t size() const { return modes_.size(); }
  Index dim() const { return dim_; }

  std::vector<Index> dims() const {
    std::vector<Index> d;
    for (const auto& m : modes_) d.push_back(m.dim());
    return d;
  }

  Index index_of(std::span<const int> labels) const {
    if (labels.size() != modes_.size())
      throw DimensionError("basis label count does not match number of modes");
    Index idx = 0;
    for (std::size_t i = 0; i < modes_.size(); ++i) {
      if (labels[i] < 0 || labels[i] >= modes_[i].dim())
        throw DomainError("basis label " + std::to_string(labels[i]) + " out of range for mode '" +
                          modes_[i].name + "'");
      idx = idx * modes_[i].dim() + labels[i];
    }
    return idx;
  }

  std::vector<int> labels_of(Index index) const {
    if (index < 0 || index >= dim_) throw DomainError("basis index out of range");
    std::vector<int> labels(modes_.size());
    for (std::size_t i = modes_.size(); i-- > 0;) {
      labels[i] = static_cast<int>(index % modes_[i].dim());
      index /= modes_[i].dim();
    }
    return labels;
  }

 private:
  std::vector<ModeSpec> modes_;
  Index dim_ = 1;
};

/// Dense complex operator with an eagerly computed Hermiticity flag.
template <typename Real>
class BasicOperatorMatrix {
 public:
  using Mat = MatrixT<Real>;

  BasicOperatorMatrix() = default;
  explicit BasicOperatorMatrix(Mat m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) throw DimensionError("operator matrix must be square");
    const Real scale = std::max(Real(1), m_.size() ? m_.cwiseAbs().maxCoeff() : Real(0));
    hermitian_ = hermiticity_defect(m_) < Real(1e-12) * scale;
  }

  const Mat& matrix() const { return m_; }
  Index dim() const { return m_.rows(); }
  bool is_hermitian() const { return hermitian_; }
  BasicOperatorMatrix adjoint() const { return BasicOperatorMatrix(m_.adjoint()); }

  friend BasicOperatorMatrix operator*(const BasicOperatorMatrix& a, const BasicOperatorMatrix& b) {
    return BasicOperatorMatrix(a.m_ * b.m_);
  }
  friend BasicOperatorMatrix operator+(const BasicOperatorMatrix& a, const BasicOperatorMatrix& b) {
    return BasicOperatorMatrix(a.m_ + b.m_);
  }
  friend BasicOperatorMatrix operator-(const BasicOperatorMatrix& a, const BasicOperatorMatrix& b) {
    return BasicOperatorMatrix(a.m_ - b.m_);
  }
  friend BasicOperatorMatrix operator*(ComplexT<Real> c, const BasicOperatorMatrix& a) {
    return BasicOperatorMatrix(c * a.m_);
  }

 private:
  Mat m_;
  bool hermitian_ = true;
};

using OperatorMatrix = BasicOperatorMatrix<double>;

enum class Transition { GE, ES };

/// Truncated annihilation operator: A[n-1, n] = sqrt(n).
template <typename Real = double>
BasicOperatorMatrix<Real> boson_annihilation(int n_max) {
  if (n_max < 1) throw DomainError("boson_annihilation: n_max must be >= 1");
  MatrixT<Real> a = MatrixT<Real>::Zero(n_max + 1, n_max + 1);
  for (int n = 1; n <= n_max; ++n) a(n - 1, n) = std::sqrt(Real(n));
  return BasicOperatorMatrix<Real>(std::move(a));
}

/// sigma^- of a qutrit transition, basis order g=0, e=1, s=2.
template <typename Real = double>
BasicOperatorMatrix<Real> qutrit_lowering(Transition t) {
  MatrixT<Real> s = MatrixT<Real>::Zero(3, 3);
  if (t == Transition::GE)
    s(0, 1) = 1;
  else
    s(1, 2) = 1;
  return BasicOperatorMatrix<Real>(std::move(s));
}

/// |level><level| on a qutrit.
template <typename Real = double>
BasicOperatorMatrix<Real> qutrit_projector(int level) {
  if (level < 0 || level > 2) throw DomainError("qutrit level out of range");
  MatrixT<Real> p = MatrixT<Real>::Zero(3, 3);
  p(level, level) = 1;
  return BasicOperatorMatrix<Real>(std::move(p));
}

template <typename Real = double>
BasicOperatorMatrix<Real> identity(Index dim) {
  return BasicOperatorMatrix<Real>(MatrixT<Real>::Identity(dim, dim));
}

/// Lift a single-mode operator to the composite space: I x ... x op x ... x I.
template <typename Real>
BasicOperatorMatrix<Real> embed(const BasicOperatorMatrix<Real>& op, std::size_t site,
                                const CompositeSpace& space) {
  if (site >= space.size()) throw DimensionError("embed: site out of range");
  if (op.dim() != space.mode(site).dim())
    throw DimensionError("embed: operator dimension does not match mode '" +
                         space.mode(site).name + "'");
  Index left = 1, right = 1;
  for (std::size_t i = 0; i < site; ++i) left *= space.mode(i).dim();
  for (std::size_t i = site + 1; i < space.size(); ++i) right *= space.mode(i).dim();
  using Mat = MatrixT<Real>;
  Mat lifted = Eigen::kroneckerProduct(Mat::Identity(left, left), op.matrix()).eval();
  lifted = Eigen::kroneckerProduct(lifted, Mat::Identity(right, right)).eval();
  return BasicOperatorMatrix<Real>(std::move(lifted));
}

/// Product ket with a single unit amplitude at the given per-mode levels.
template <typename Real = double>
BasicQuantumState<Real> basis_ket(std::span<const int> labels, const CompositeSpace& space) {
  VectorT<Real> v = VectorT<Real>::Zero(space.dim());
  v(space.index_of(labels)) = 1;
  return BasicQuantumState<Real>::ket(std::move(v));
}

template <typename Real = double>
BasicQuantumState<Real> basis_ket(std::initializer_list<int> labels, const CompositeSpace& space) {
  return basis_ket<Real>(std::span<const int>(labels.begin(), labels.size()), space);
}

template <typename Real>
BasicOperatorMatrix<Real> commutator(const BasicOperatorMatrix<Real>& a,
                                     const BasicOperatorMatrix<Real>& b) {
  return BasicOperatorMatrix<Real>(a.matrix() * b.matrix() - b.matrix() * a.matrix());
}

}  // namespace darkgate
