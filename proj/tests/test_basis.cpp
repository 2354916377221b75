#include "teps/basis.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace teps;

TEST_CASE("free lattice spectrum matches the discrete sine modes") {
  LatticeBasis lb;
  lb.a = 0.1;
  lb.points = 200;
  const UnitSystem u;
  const auto H = build_lattice_hamiltonian(lb, Gaussian{0.0, 1.0}, u, 0);
  const auto d = decompose(H);
  const int N = lb.points;
  for (int j : {1, 2, 50, 200}) {
    const double expected = 2.0 * u.kinetic_coeff / (lb.a * lb.a) * (1.0 - std::cos(j * std::numbers::pi / (N + 1)));
    CHECK(d.energies(j - 1) == doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("lattice decomposition reconstructs H") {
  LatticeBasis lb;
  lb.a = 0.05;
  lb.points = 300;
  const auto H = build_lattice_hamiltonian(lb, Gaussian{1.0, 2.0}, UnitSystem{}, 1);
  const auto d = decompose(H);
  const Eigen::MatrixXd Hd = H.to_dense();
  CHECK((d.vectors * d.energies.asDiagonal() * d.vectors.transpose() - Hd).norm() / Hd.norm() < 1e-12);
  CHECK(H.norm_estimate() >= d.energies.cwiseAbs().maxCoeff() * (1 - 1e-12));
}

TEST_CASE("lattice momentum snaps to the box modes") {
  LatticeBasis lb;
  lb.a = 0.04;
  lb.points = 3000;
  const double k = nearest_kinetic_momentum(lb, UnitSystem{}, 1.73);
  CHECK(k == doctest::Approx(1.7273).epsilon(1e-4));
  const double W = lb.wall();
  const double n = k * W / std::numbers::pi;
  CHECK(std::abs(n - std::round(n)) < 1e-9);
}

TEST_CASE("bessel basis: overlap, generalized eigenproblem, free momentum") {
  BesselParams p;  // N_k = 8, k0 = 0.315, dk = 0.0084, R = 750
  const auto b = make_bessel_basis(p);
  REQUIRE(b.size() == 16);
  const Eigen::MatrixXd& S = *b.overlap;
  CHECK((S - S.transpose()).norm() < 1e-12 * S.norm());
  const auto H = build_bessel_hamiltonian(b, Gaussian{1.0, 2.0}, UnitSystem{});
  CHECK((H.dense - H.dense.transpose()).norm() < 1e-10 * H.dense.norm());
  const auto d = decompose(H);
  CHECK((H.dense * d.vectors - S * d.vectors * d.energies.asDiagonal()).norm() < 1e-10 * H.dense.norm());
  CHECK(nearest_kinetic_momentum(Basis{b}, UnitSystem{}, 0.351) == doctest::Approx(0.35208).epsilon(1e-4));
}

TEST_CASE("bessel projection reproduces a basis function") {
  BesselParams p;
  p.nk = 4;
  const auto b = make_bessel_basis(p);
  const Eigen::VectorXd target = b.samples->f.col(2);
  const Eigen::VectorXd c = b.project(target);
  for (Eigen::Index i = 0; i < c.size(); ++i) CHECK(c(i) == doctest::Approx(i == 2 ? 1.0 : 0.0).epsilon(1e-6));
}

TEST_CASE("basis parameter validation") {
  LatticeBasis lb;
  lb.points = 1;
  CHECK_THROWS_AS(lb.validate(), std::invalid_argument);
  BesselParams p;
  p.nk = 0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}
