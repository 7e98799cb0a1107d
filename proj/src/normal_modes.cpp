#include "darkgate/normal_modes.hpp"

#include <cmath>

namespace darkgate {
namespace {

constexpr double kRelTol = 1e-12;

bool same(double x, double y) { return std::abs(x - y) <= kRelTol * std::max(std::abs(x), std::abs(y)); }

int excitation(const std::vector<int>& labels) {
  int n = 0;
  for (int l : labels) n += l;
  return n;
}

}  // namespace

ModeTransform ModeTransform::canonical() {
  const double h = 0.5, r = std::sqrt(2.0) / 2.0;
  ModeTransform t;
  t.matrix << h, h, r,
              h, h, -r,
              r, -r, 0.0;
  return t;
}

Eigen::Vector3cd transform_operator(BareMode mode) {
  const Eigen::Matrix3cd inv = ModeTransform::canonical().inverse();
  const int row = mode == BareMode::A ? 0 : mode == BareMode::B ? 1 : 2;
  return inv.row(row).transpose();
}

CollectiveOperators collective_operators(const CompositeSpace& device) {
  const OperatorMatrix bare[3] = {embed(boson_annihilation(device.mode(site::ra).n_max), site::ra, device),
                                  embed(boson_annihilation(device.mode(site::rb).n_max), site::rb, device),
                                  embed(boson_annihilation(device.mode(site::rf).n_max), site::rf, device)};
  const Eigen::Matrix3cd t = ModeTransform::canonical().matrix;
  auto combine = [&](int row) {
    Matrix m = Matrix::Zero(device.dim(), device.dim());
    for (int k = 0; k < 3; ++k) m += t(row, k) * bare[k].matrix();
    return OperatorMatrix(std::move(m));
  };
  return {combine(0), combine(1), combine(2)};
}

HDoublePrimeCheck verify_h_double_prime(const DeviceParams& p, int n_max) {
  const double w = p.omega_a;
  if (!(same(p.omega_b, w) && same(p.omega_f, w) && same(p.omega1_ge, w) && same(p.omega2_ge, w)))
    throw DomainError("verify_h_double_prime: requires omega_a = omega_b = omega_f = omega_1 = omega_2");
  if (!same(p.gf_a, p.gf_b)) throw DomainError("verify_h_double_prime: requires gf_a == gf_b");
  if (n_max < 2) throw DomainError("verify_h_double_prime: n_max must be >= 2");
  const double g = p.gf_a;

  // Lab frame H' on [q1, q2, a, b, f].
  const CompositeSpace bare = device_space(p, n_max);
  const Matrix h_prime = build_lab_qubit_hamiltonian(p, bare).at(0.0);

  // H'' on a re-tensored [q1, q2, C+, C-, C] space, normally ordered.
  const CompositeSpace coll({bare.mode(0), bare.mode(1), ModeSpec::boson("C+", w + std::sqrt(2.0) * g, n_max),
                             ModeSpec::boson("C-", w - std::sqrt(2.0) * g, n_max), ModeSpec::boson("C", w, n_max)});
  const auto cp = embed(boson_annihilation(n_max), 2, coll);
  const auto cm = embed(boson_annihilation(n_max), 3, coll);
  const auto cc = embed(boson_annihilation(n_max), 4, coll);
  const auto s1 = embed(qutrit_lowering(Transition::GE), site::q1, coll);
  const auto s2 = embed(qutrit_lowering(Transition::GE), site::q2, coll);
  const auto p1s = embed(qutrit_projector(2), site::q1, coll);
  const auto p2s = embed(qutrit_projector(2), site::q2, coll);
  const double r2 = std::sqrt(2.0);

  Matrix hpp = w * (s1.adjoint() * s1).matrix() + w * (s2.adjoint() * s2).matrix() +
               w * (cc.adjoint() * cc).matrix() + (w + r2 * g) * (cp.adjoint() * cp).matrix() +
               (w - r2 * g) * (cm.adjoint() * cm).matrix() +
               (p.omega1_ge + p.omega1_es) * p1s.matrix() + (p.omega2_ge + p.omega2_es) * p2s.matrix();
  Matrix x1 = 0.5 * p.g1_ge * ((cp + cm).matrix() + r2 * cc.matrix()) * s1.adjoint().matrix();
  Matrix x2 = 0.5 * p.g2_ge * ((cp + cm).matrix() - r2 * cc.matrix()) * s2.adjoint().matrix();
  hpp += x1 + x1.adjoint() + x2 + x2.adjoint();

  // Collective Fock states expressed in the bare basis: prod_k (C_k^+)^{n_k}/sqrt(n_k!) |q1 q2 vac>.
  const CollectiveOperators ops = collective_operators(bare);
  const Matrix creators[3] = {ops.c_plus.matrix().adjoint(), ops.c_minus.matrix().adjoint(),
                              ops.c.matrix().adjoint()};
  std::vector<Index> coll_index;
  std::vector<int> coll_exc;
  std::vector<Vector> images;
  for (Index idx = 0; idx < coll.dim(); ++idx) {
    const auto l = coll.labels_of(idx);
    if (l[0] > 1 || l[1] > 1) continue;  // s levels are spectators
    if (l[2] + l[3] + l[4] > 2) continue;
    if (excitation(l) > 2) continue;
    Vector v = basis_ket({l[0], l[1], 0, 0, 0}, bare).vector();
    for (int k = 0; k < 3; ++k)
      for (int n = 1; n <= l[2 + k]; ++n) v = (creators[k] * v) / std::sqrt(static_cast<double>(n));
    coll_index.push_back(idx);
    coll_exc.push_back(excitation(l));
    images.push_back(std::move(v));
  }

  HDoublePrimeCheck out;
  out.scale = h_prime.cwiseAbs().maxCoeff();
  for (std::size_t m = 0; m < images.size(); ++m) {
    const Vector hv = h_prime * images[m];
    for (std::size_t n = 0; n < images.size(); ++n) {
      const Complex conj = images[n].dot(hv);
      const double d = std::abs(hpp(coll_index[n], coll_index[m]) - conj) / out.scale;
      if (coll_exc[m] <= 1 && coll_exc[n] <= 1) out.residual_le1 = std::max(out.residual_le1, d);
      out.residual_le2 = std::max(out.residual_le2, d);
    }
  }
  const Index i_minus = coll.index_of(std::vector<int>{0, 0, 0, 1, 0});
  const Index i_c = coll.index_of(std::vector<int>{0, 0, 0, 0, 1});
  const Index i_plus = coll.index_of(std::vector<int>{0, 0, 1, 0, 0});
  out.collective_frequencies = {hpp(i_minus, i_minus).real(), hpp(i_c, i_c).real(), hpp(i_plus, i_plus).real()};
  return out;
}

ModePopulations mode_populations(const QuantumState& state, const CompositeSpace& device) {
  const CollectiveOperators ops = collective_operators(device);
  const auto f = embed(boson_annihilation(device.mode(site::rf).n_max), site::rf, device);
  return {expectation(ops.c_plus.adjoint() * ops.c_plus, state),
          expectation(ops.c_minus.adjoint() * ops.c_minus, state),
          expectation(ops.c.adjoint() * ops.c, state), expectation(f.adjoint() * f, state)};
}

}  // namespace darkgate
