#include <random>
#include <set>

#include "darkgate/analysis.hpp"
#include "darkgate/dynamics.hpp"
#include "darkgate/model.hpp"
#include "doctest.h"

using namespace darkgate;

namespace {

DeviceParams paper_point(double lifetime = 0.0) {
  OperatingPoint op;
  op.lifetime = lifetime;
  return make_device(op);
}

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

Index idx(const CompositeSpace& s, std::initializer_list<int> l) {
  return s.index_of(std::span<const int>(l.begin(), l.size()));
}

}  // namespace

TEST_CASE("derived couplings and rates") {
  const DeviceParams p = paper_point(50e-6);
  CHECK(p.g1_es() == std::sqrt(2.0) * p.g1_ge);
  CHECK(p.g2_es() == std::sqrt(2.0) * p.g2_ge);
  CHECK(p.g2_es() / p.g1_ge == doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));
  CHECK(p.gamma1_ge == doctest::Approx(2e4).epsilon(1e-14));
  CHECK(p.gamma1_es() == doctest::Approx(4e4).epsilon(1e-14));
  CHECK(p.gamma2_es() == 2.0 * p.gamma2_ge);
  CHECK(p.anharmonicity1() == doctest::Approx(kTwoPi * 720e6));
  CHECK(p.anharmonicity2() == doctest::Approx(kTwoPi * 720e6));

  DeviceParams bad = p;
  bad.g1_ge = -1.0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  CHECK_THROWS_AS(LindbladChannel("x", -1.0, identity(3)), DomainError);
}

TEST_CASE("lab-frame qubit Hamiltonian") {
  DeviceParams p = paper_point();
  const CompositeSpace s = device_space(p, 1);

  SUBCASE("vacuum energy is zero") {
    const Matrix h = build_lab_qubit_hamiltonian(p, s).at(0.0);
    CHECK(std::abs(h(0, 0)) == 0.0);
  }
  SUBCASE("zero couplings give the diagonal of bare energies") {
    p.g1_ge = p.g2_ge = p.gf_a = p.gf_b = 0.0;
    const Matrix h = build_lab_qubit_hamiltonian(p, s).at(0.0);
    CHECK((h - Matrix(h.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0);
    CHECK(h(idx(s, {1, 0, 0, 0, 0}), idx(s, {1, 0, 0, 0, 0})).real() == p.omega1_ge);
    CHECK(h(idx(s, {0, 0, 1, 1, 1}), idx(s, {0, 0, 1, 1, 1})).real() ==
          doctest::Approx(p.omega_a + p.omega_b + p.omega_f));
  }
  SUBCASE("single-excitation block matches the hand-built matrix") {
    p.omega_b = kTwoPi * 6.01e9;
    p.omega_f = kTwoPi * 5.99e9;
    p.gf_b = 0.7 * p.gf_a;
    const Matrix h = build_lab_qubit_hamiltonian(p, s).at(0.0);
    const Index states[5] = {idx(s, {1, 0, 0, 0, 0}), idx(s, {0, 1, 0, 0, 0}), idx(s, {0, 0, 1, 0, 0}),
                             idx(s, {0, 0, 0, 1, 0}), idx(s, {0, 0, 0, 0, 1})};
    Matrix block(5, 5);
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) block(i, j) = h(states[i], states[j]);
    Matrix hand = Matrix::Zero(5, 5);
    hand.diagonal() << p.omega1_ge, p.omega2_ge, p.omega_a, p.omega_b, p.omega_f;
    hand(0, 2) = hand(2, 0) = p.g1_ge;
    hand(1, 3) = hand(3, 1) = p.g2_ge;
    hand(2, 4) = hand(4, 2) = p.gf_a;
    hand(3, 4) = hand(4, 3) = p.gf_b;
    CHECK(max_abs(block - hand) == 0.0);
  }
}

TEST_CASE("H_2q term structure at the operating point") {
  const DeviceParams p = paper_point();
  const CompositeSpace s = device_space(p, 2);
  const Hamiltonian h = build_h2q(p, s);
  REQUIRE(h.terms().size() == 6);
  std::set<std::string> resonant;
  for (const auto& t : h.terms())
    if (t.detuning == 0.0) resonant.insert(t.label);
  CHECK(resonant == std::set<std::string>{"g1_ge", "g2_es", "gf_a", "gf_b"});
  CHECK(h.find("g1_es")->detuning == doctest::Approx(-p.anharmonicity1()));
  CHECK(h.find("g2_ge")->detuning == doctest::Approx(p.anharmonicity2()));
  CHECK_FALSE(h.is_time_independent());
  CHECK(h.without_detuned_terms().is_time_independent());
  CHECK(build_h2q_resonant(p, s).is_time_independent());

  SUBCASE("detuned terms deleted equals the resonant builder") {
    CHECK(max_abs(h.without_detuned_terms().at(0.0) - build_h2q_resonant(p, s).at(0.0)) == 0.0);
  }
  SUBCASE("forcing detunings to zero equals evaluation at t = 0") {
    CHECK(max_abs(h.without_detunings().at(1.234e-9) - h.at(0.0)) == 0.0);
  }
  SUBCASE("resonant plus corrections is the full Hamiltonian") {
    const Hamiltonian sum = build_h2q_resonant(p, s) + build_unresonant_corrections(p, s);
    for (double t : {0.0, 3e-10, 7.7e-8}) CHECK(max_abs(sum.at(t) - h.at(t)) < 1e-6);
  }
}

TEST_CASE("property: every builder is Hermitian at random times") {
  const DeviceParams p = paper_point();
  const CompositeSpace s = device_space(p, 2);
  const CompositeSpace small = effective_space(p, 2);
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0.0, 100e-9);
  const Hamiltonian builders[] = {build_h2q(p, s), build_h2q_resonant(p, s), build_unresonant_corrections(p, s),
                                  build_interaction_qubit_hamiltonian(p, device_space(p, 1)),
                                  build_heff(p, small), build_heff_prime(p, small)};
  for (const auto& h : builders)
    for (int k = 0; k < 10; ++k) {
      const Matrix m = h.at(u(rng));
      CHECK(hermiticity_defect(m) < 1e-12 * std::max(1.0, max_abs(m)));
    }
}

TEST_CASE("time independence iff every detuning is zero") {
  DeviceParams p = paper_point();
  p.omega1_es = p.omega1_ge;
  p.omega2_ge = p.omega2_es;
  CHECK(build_h2q(p, device_space(p, 1)).is_time_independent());
  p.omega_f = kTwoPi * 6.001e9;
  CHECK_FALSE(build_h2q_resonant(p, device_space(p, 1)).is_time_independent());
}

TEST_CASE("line modes alone split into {0, +-sqrt2 gf}") {
  DeviceParams p = paper_point();
  p.g1_ge = p.g2_ge = 0.0;
  const CompositeSpace s = device_space(p, 1);
  const Matrix h = build_h2q_resonant(p, s).at(0.0);
  const Index st[3] = {idx(s, {0, 0, 1, 0, 0}), idx(s, {0, 0, 0, 1, 0}), idx(s, {0, 0, 0, 0, 1})};
  Matrix block(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) block(i, j) = h(st[i], st[j]);
  Eigen::SelfAdjointEigenSolver<Matrix> es(block);
  const double g = std::sqrt(2.0) * p.gf_a;
  CHECK(es.eigenvalues()(0) == doctest::Approx(-g).epsilon(1e-12));
  CHECK(std::abs(es.eigenvalues()(1)) < 1e-12 * g);
  CHECK(es.eigenvalues()(2) == doctest::Approx(g).epsilon(1e-12));
}

TEST_CASE("q2 decouples when its couplings vanish") {
  DeviceParams p = paper_point();
  p.g2_ge = 0.0;
  const CompositeSpace s = device_space(p, 2);
  const Hamiltonian h = build_h2q_resonant(p, s);
  const OperatorMatrix pe2 = embed(qutrit_projector(1), site::q2, s);
  for (double t : {1e-9, 4e-8, 1.3e-7}) {
    const QuantumState psi = propagate_static(h, basis_ket({0, 1, 0, 0, 0}, s), t);
    CHECK(expectation(pe2, psi) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("dark-mode Hamiltonians") {
  DeviceParams p = paper_point();
  const CompositeSpace small = effective_space(p, 2);

  SUBCASE("zero couplings give the zero matrix") {
    DeviceParams z = p;
    z.g1_ge = z.g2_ge = 0.0;
    CHECK(max_abs(build_heff(z, small).at(0.0)) == 0.0);
    CHECK(max_abs(build_heff_prime(z, small).at(0.0)) == 0.0);
  }
  SUBCASE("vacuum is dark") {
    const Matrix h = build_heff(p, small).at(0.0);
    CHECK(h.row(0).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("|e,g,0> population under H_eff follows cos^2(g t / sqrt2) with q2 detached") {
    DeviceParams q = p;
    q.g2_ge = 0.0;
    const Hamiltonian h = build_heff(q, small);
    for (double t : {5e-9, 2.1e-8, 6e-8}) {
      const QuantumState psi = propagate_static(h, basis_ket({1, 0, 0}, small), t);
      const double c = std::cos(p.g1_ge * t / std::sqrt(2.0));
      CHECK(std::norm(psi.vector()(idx(small, {1, 0, 0}))) == doctest::Approx(c * c).epsilon(1e-12));
    }
  }
  SUBCASE("|g,e,0> is a zero-energy eigenstate of H_eff'") {
    const Matrix h = build_heff_prime(p, small).at(0.0);
    CHECK((h * basis_ket({0, 1, 0}, small).vector()).norm() == 0.0);
  }
  SUBCASE("H_eff' couples only the documented blocks") {
    const Matrix h = build_heff_prime(p, small).at(0.0);
    const std::vector<std::vector<Index>> blocks = {
        {idx(small, {0, 0, 0})},
        {idx(small, {0, 1, 0})},
        {idx(small, {1, 0, 0}), idx(small, {0, 0, 1})},
        {idx(small, {1, 1, 0}), idx(small, {0, 1, 1}), idx(small, {0, 2, 0})},
    };
    for (const auto& block : blocks)
      for (Index j : block) {
        Vector col = h.col(j);
        for (Index i : block) col(i) = 0.0;
        CHECK(col.norm() == 0.0);
      }
    CHECK(std::abs(h(idx(small, {1, 0, 0}), idx(small, {0, 0, 1}))) > 0.0);
    CHECK(std::abs(h(idx(small, {1, 1, 0}), idx(small, {0, 1, 1}))) > 0.0);
    CHECK(std::abs(h(idx(small, {0, 2, 0}), idx(small, {0, 1, 1}))) > 0.0);
  }
}

TEST_CASE("unresonant corrections average out far from resonance") {
  OperatingPoint op;
  op.omega = kTwoPi * 1e11;
  op.lifetime = 0.0;
  DeviceParams p = make_device(op);
  const double big = 1e4 * p.g1_ge;
  p.omega1_es = p.omega1_ge - big;
  p.omega2_ge = p.omega2_es + big;
  const CompositeSpace s = device_space(p, 1);
  const Hamiltonian c = build_unresonant_corrections(p, s);
  for (const auto& t : c.terms()) CHECK(std::abs(std::abs(t.detuning) - big) < 1e-6 * big);
  const int n = 64;
  const double period = kTwoPi / big;
  Matrix avg = Matrix::Zero(s.dim(), s.dim());
  for (int k = 0; k < n; ++k) avg += c.at(period * k / n) / double(n);
  CHECK(max_abs(avg) < 1e-9 * max_abs(c.at(0.0)));
  CHECK(max_abs(c.at(0.0)) > 0.0);
}

TEST_CASE("far-detuned corrections leave the resonant gate intact") {
  OperatingPoint op;
  op.omega = kTwoPi * 1e11;
  op.lifetime = 0.0;
  DeviceParams p = make_device(op);
  const double big = 1e4 * p.g1_ge;
  p.omega1_es = p.omega1_ge - big;
  p.omega2_ge = p.omega2_es + big;
  const CompositeSpace s = device_space(p, 2);
  const double t = gate_timing(1, 1, p.g1_ge).t_gate;
  const std::vector<double> times{0.0, t};
  const QuantumState full = propagate_td(build_h2q(p, s), psi_max(s), times).final_state();
  const QuantumState res = propagate_static(build_h2q_resonant(p, s), psi_max(s), t);
  CHECK(1.0 - state_fidelity_pure(res, full) < 1e-6);
}

TEST_CASE("Lindblad channels") {
  SUBCASE("zero rates give an empty dissipator") {
    const DeviceParams p = paper_point();
    const CompositeSpace s = device_space(p, 1);
    Matrix sum = Matrix::Zero(s.dim(), s.dim());
    for (const auto& c : build_lindblad_channels(p, s))
      sum += c.rate * (c.op.adjoint() * c.op).matrix();
    CHECK(max_abs(sum) == 0.0);
  }
  SUBCASE("50 us lifetimes") {
    const DeviceParams p = paper_point(50e-6);
    const CompositeSpace s = device_space(p, 1);
    const auto ch = build_lindblad_channels(p, s);
    CHECK(ch.size() == 11);
    for (const auto& c : ch) {
      if (c.label.find("_es") != std::string::npos)
        CHECK(c.rate == doctest::Approx(4e4).epsilon(1e-14));
      else
        CHECK(c.rate == doctest::Approx(2e4).epsilon(1e-14));
      if (c.label.find("phi") != std::string::npos) CHECK(max_abs((c.op * c.op).matrix() - c.op.matrix()) == 0.0);
    }
  }
}
