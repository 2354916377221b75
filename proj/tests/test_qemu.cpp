#include "teps/propagate.hpp"
#include "teps/qemu.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace teps;
using namespace teps::qemu;

TEST_CASE("single-qubit gates and qubit ordering") {
  Circuit c{2, {ry(0, M_PI)}};
  const auto s = apply_circuit(c, zero_state(2));
  // qubit 0 is the most significant bit: |10> is index 2
  CHECK(std::abs(s(2)) == doctest::Approx(1.0));
  Circuit bell{2, {ry(0, M_PI / 2), cnot(0, 1)}};
  const auto b = apply_circuit(bell, zero_state(2));
  CHECK(std::abs(b(0)) == doctest::Approx(M_SQRT1_2));
  CHECK(std::abs(b(3)) == doctest::Approx(M_SQRT1_2));
  CHECK_THROWS(Circuit({1, {cnot(0, 0)}}).validate());
}

TEST_CASE("gray-code preparation reproduces arbitrary real amplitudes") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> N(0.0, 1.0);
  for (int n = 1; n <= 5; ++n) {
    for (int rep = 0; rep < 5; ++rep) {
      Eigen::VectorXd v(1 << n);
      for (auto& x : v) x = N(rng);
      v.normalize();
      const auto c = graycode_real_prep(v, n);
      const auto s = apply_circuit(c, zero_state(n));
      CHECK((s - v.cast<std::complex<double>>()).norm() < 1e-12);
      // inverse returns to |0...0>
      CHECK(std::abs(apply_circuit(inverse_circuit(c), s)(0)) == doctest::Approx(1.0).epsilon(1e-12));
      // 2^n - 1 rotations; level l of the cascade needs 2^l CNOTs
      CHECK(c.count(Gate::Kind::Ry) == static_cast<std::size_t>((1 << n) - 1));
      CHECK(c.count(Gate::Kind::CNOT) == static_cast<std::size_t>((1 << n) - 2));
    }
  }
  CHECK_THROWS(graycode_real_prep(Eigen::VectorXd::Ones(4), 2));
}

TEST_CASE("odd partial waves pick up a global factor i") {
  Eigen::VectorXd v(2);
  v << 0.6, 0.8;
  const auto s = apply_circuit(graycode_real_prep(v, 1, true), zero_state(1));
  CHECK(std::abs(s(0) - std::complex<double>(0.0, 0.6)) < 1e-12);
}

TEST_CASE("diagonal evolution applies exp(-i E t)") {
  Eigen::VectorXd E(3);
  E << 0.1, -0.4, 2.0;
  const auto c = diagonal_evolution(E, 1.7, 2);
  StateVector s = StateVector::Constant(4, 0.5);
  const auto out = apply_circuit(c, s);
  for (int j = 0; j < 3; ++j) CHECK(std::abs(out(j) - 0.5 * std::exp(std::complex<double>(0, -E(j) * 1.7))) < 1e-14);
  CHECK(std::abs(out(3) - 0.5) < 1e-14);
}

TEST_CASE("serialize and parse round trip, with line-precise errors") {
  Eigen::VectorXd v(8);
  v << 1, 2, 3, 4, 5, 6, 7, 8;
  v.normalize();
  Circuit c = concat(graycode_real_prep(v, 3), Circuit{3, {rz(1, 0.2), u3(2, 0.1, 0.2, 0.3), cz(0, 2)}});
  const auto text = serialize(c);
  const auto back = parse_circuit(text);
  CHECK(serialize(back) == text);
  CHECK((apply_circuit(back, zero_state(3)) - apply_circuit(c, zero_state(3))).norm() < 1e-15);
  try {
    parse_circuit("qubits 2\nry 0 0.5\nfoo 1 -\n");
    FAIL("expected a parse error");
  } catch (const std::exception& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("depolarizing channel and decoherence renormalization") {
  const NoiseModel noise{0.4};
  CHECK(depolarize(0.5, noise, 4) == doctest::Approx(0.4 * 0.5 + 0.6 / 16));
  for (double p : {0.0, 0.13, 0.9}) {
    const auto r = decoherence_renormalize({depolarize(p, noise, 4), depolarize(1.0, noise, 4), 1.0, 4});
    CHECK(r.P == doctest::Approx(p).epsilon(1e-14));
    CHECK_FALSE(r.clamped);
  }
  CHECK_THROWS_AS(decoherence_renormalize({0.1, 1.0 / 16, 1.0, 4}), std::domain_error);
  CHECK(decoherence_renormalize({0.0, 0.5, 1.0, 4}).clamped);
  CHECK_THROWS(NoiseModel{1.5}.validate());
}

TEST_CASE("shots are seeded and deterministic") {
  StateVector s = zero_state(2);
  s(0) = std::sqrt(0.3);
  s(3) = std::sqrt(0.7);
  const double a = measure_all_zero_prob(s, 1000L, std::nullopt, 9);
  CHECK(a == measure_all_zero_prob(s, 1000L, std::nullopt, 9));
  CHECK(measure_all_zero_prob(s) == doctest::Approx(0.3));
  CHECK(measure_all_zero_prob(s, std::nullopt, NoiseModel{0.5}) == doctest::Approx(0.15 + 0.5 / 4));
}

TEST_CASE("eigenbasis emulation equals the classical overlap") {
  const auto b = make_bessel_basis(BesselParams{});
  const Basis basis = b;
  const auto H = build_bessel_hamiltonian(b, Gaussian{1.0, 2.0}, UnitSystem{});
  const auto d = decompose(H);
  const double k = nearest_kinetic_momentum(basis, UnitSystem{}, 0.351);
  const auto psi = prepare_initial(basis, k, 0, FermiFilter{110.0, 20.0});
  auto spec = make_detector_spec(k, 0, 2, 6);
  const auto det = prepare_detector(basis, spec);
  const auto m = make_emulator_model(d, psi);
  CHECK(m.n == 4);
  const Eigen::VectorXd da = eigen_amplitudes(d, det, m.n);
  std::mt19937_64 rng(1);
  for (double t : {0.0, 250.0, 600.0}) {
    const double classical = std::norm(inner(det, evolve(psi, d, t)));
    CHECK(std::abs(emulate_overlap(m, da, t, std::nullopt, std::nullopt, rng) - classical) < 1e-10);
  }
  CHECK(emulate_identity_reference(m, std::nullopt, std::nullopt, rng) == doctest::Approx(1.0).epsilon(1e-12));
}
