#include <random>

#include "darkgate/analysis.hpp"
#include "darkgate/dynamics.hpp"
#include "darkgate/normal_modes.hpp"
#include "darkgate/selfcheck.hpp"
#include "doctest.h"

using namespace darkgate;

namespace {

DeviceParams resonant_point() {
  OperatingPoint op;
  op.lifetime = 0.0;
  return resonant_copy(make_device(op));
}

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

// Largest entry of (A - B) over basis states with total photon number < n_max.
double safe_defect(const Matrix& a, const Matrix& b, const CompositeSpace& s) {
  double worst = 0.0;
  const int n_max = s.mode(site::ra).n_max;
  for (Index j = 0; j < s.dim(); ++j) {
    const auto l = s.labels_of(j);
    if (l[2] + l[3] + l[4] >= n_max) continue;
    worst = std::max(worst, (a.col(j) - b.col(j)).cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace

TEST_CASE("canonical transform is unitary") {
  const Eigen::Matrix3cd t = ModeTransform::canonical().matrix;
  CHECK((t * t.adjoint() - Eigen::Matrix3cd::Identity()).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((ModeTransform::canonical().inverse() * t - Eigen::Matrix3cd::Identity()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("bare operators over (C+, C-, C)") {
  const Eigen::Vector3cd a = transform_operator(BareMode::A), b = transform_operator(BareMode::B);
  const Eigen::Vector3cd diff = a - b, sum = a + b;
  CHECK((diff - Eigen::Vector3cd(0, 0, std::sqrt(2.0))).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((sum - Eigen::Vector3cd(1, 1, 0)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("collective operator algebra on the truncation-safe subspace") {
  const DeviceParams p = resonant_point();
  const CompositeSpace s = device_space(p, 2);
  const CollectiveOperators ops = collective_operators(s);
  const Matrix zero = Matrix::Zero(s.dim(), s.dim());
  const Matrix id = Matrix::Identity(s.dim(), s.dim());
  CHECK(safe_defect(commutator(ops.c, ops.c_plus.adjoint()).matrix(), zero, s) < 1e-14);
  CHECK(safe_defect(commutator(ops.c, ops.c_minus.adjoint()).matrix(), zero, s) < 1e-14);
  CHECK(safe_defect(commutator(ops.c, ops.c.adjoint()).matrix(), id, s) < 1e-14);
}

TEST_CASE("H'' verification") {
  const DeviceParams p = resonant_point();
  const HDoublePrimeCheck c = verify_h_double_prime(p, 2);
  CHECK(c.residual_le1 < 1e-10);
  CHECK(c.residual_le2 < 1e-8);
  const double w = p.omega_a, g = std::sqrt(2.0) * p.gf_a;
  CHECK(std::abs(c.collective_frequencies[0] - (w - g)) < 1e-10 * w);
  CHECK(std::abs(c.collective_frequencies[1] - w) < 1e-10 * w);
  CHECK(std::abs(c.collective_frequencies[2] - (w + g)) < 1e-10 * w);

  SUBCASE("no line coupling leaves the collective modes degenerate") {
    DeviceParams q = p;
    q.gf_a = q.gf_b = 0.0;
    const HDoublePrimeCheck z = verify_h_double_prime(q, 2);
    for (double f : z.collective_frequencies) CHECK(std::abs(f - w) < 1e-12 * w);
  }
  SUBCASE("preconditions") {
    DeviceParams q = p;
    q.gf_b = 2.0 * q.gf_a;
    CHECK_THROWS_AS(verify_h_double_prime(q, 2), DomainError);
    CHECK_THROWS_AS(verify_h_double_prime(p, 1), DomainError);
    OperatingPoint op;
    CHECK_THROWS_AS(verify_h_double_prime(make_device(op), 2), DomainError);
  }
}

TEST_CASE("mode populations") {
  const DeviceParams p = resonant_point();
  const CompositeSpace s = device_space(p, 2);
  const ModePopulations vac = mode_populations(basis_ket({0, 0, 0, 0, 0}, s), s);
  CHECK(vac.c_plus == 0.0);
  CHECK(vac.c_minus == 0.0);
  CHECK(vac.c == 0.0);
  CHECK(vac.f == 0.0);

  const Vector dark = (basis_ket({0, 0, 1, 0, 0}, s).vector() - basis_ket({0, 0, 0, 1, 0}, s).vector()) / std::sqrt(2.0);
  const ModePopulations d = mode_populations(QuantumState::ket(dark), s);
  CHECK(d.c == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(d.c_plus) < 1e-15);
  CHECK(std::abs(d.c_minus) < 1e-15);
  CHECK(std::abs(d.f) < 1e-15);
}

TEST_CASE("property: photon number is conserved by the basis change") {
  const DeviceParams p = resonant_point();
  const CompositeSpace s = device_space(p, 2);
  std::mt19937_64 rng(9);
  std::normal_distribution<double> nd;
  const auto num = [&](std::size_t site) {
    const auto a = embed(boson_annihilation(2), site, s);
    return a.adjoint() * a;
  };
  const OperatorMatrix na = num(site::ra), nb = num(site::rb);
  for (int trial = 0; trial < 5; ++trial) {
    // Random state on at most one photon in total.
    Vector v = Vector::Zero(s.dim());
    for (Index i = 0; i < s.dim(); ++i) {
      const auto l = s.labels_of(i);
      if (l[2] + l[3] + l[4] <= 1) v(i) = Complex(nd(rng), nd(rng));
    }
    const QuantumState psi = QuantumState::ket(v.normalized());
    const ModePopulations m = mode_populations(psi, s);
    const double bare = expectation(na, psi) + expectation(nb, psi) + m.f;
    CHECK(m.c_plus + m.c_minus + m.c == doctest::Approx(bare).epsilon(1e-12));
  }
}

TEST_CASE("the line stays dark during the gate") {
  double previous = 1.0;
  for (double delta : {5.0, 10.0, 25.0}) {
    OperatingPoint op;
    op.line_ratio = delta;
    op.lifetime = 0.0;
    const DeviceParams p = make_device(op);
    const CompositeSpace s = device_space(p, 2);
    const double tg = gate_timing(1, 1, p.g1_ge).t_gate;
    Trajectory tr = propagate_td(build_h2q(p, s), psi_max(s), tg, 0.0, 200);
    const auto f = embed(boson_annihilation(2), site::rf, s);
    record_observable(tr, "n_f", f.adjoint() * f);
    const auto& nf = tr.observables.at("n_f");
    const double peak = *std::max_element(nf.begin(), nf.end());
    CHECK(peak < previous);
    if (delta == 25.0) CHECK(peak < 0.01);
    previous = peak;
  }
}
