#include "teps/units.hpp"

#include <doctest.h>

#include <cmath>

using namespace teps;

TEST_CASE("gaussian potential shape") {
  const PotentialSpec g = Gaussian{2.0, 4.0};
  CHECK(evaluate_potential(g, 0.0) == doctest::Approx(2.0));
  CHECK(evaluate_potential(g, 4.0) == doctest::Approx(2.0 * std::exp(-1.0)));
  // |V| drops below tol at sigma sqrt(ln(V0/tol))
  CHECK(potential_range(g, 1e-8) == doctest::Approx(4.0 * std::sqrt(std::log(2e8))));
}

TEST_CASE("lennard-jones minimum and flat core") {
  LennardJones lj;
  const PotentialSpec p = lj;
  const double rmin = std::pow(2.0, 1.0 / 6.0) * lj.sigma;
  CHECK(evaluate_potential(p, rmin) == doctest::Approx(-lj.epsilon));
  CHECK(evaluate_potential(p, lj.sigma) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(evaluate_potential(p, 0.1) == doctest::Approx(evaluate_potential(p, lj.r_core)));
  const double far = potential_range(p, 1e-6);
  CHECK(std::abs(evaluate_potential(p, far)) <= 1e-6);
}

TEST_CASE("tabulated potential interpolates and vanishes past the table") {
  const PotentialSpec t = Tabulated{{1.0, 2.0, 3.0}, {4.0, 2.0, 1.0}};
  CHECK(evaluate_potential(t, 0.5) == doctest::Approx(4.0));
  CHECK(evaluate_potential(t, 1.5) == doctest::Approx(3.0));
  CHECK(evaluate_potential(t, 3.5) == 0.0);
  CHECK_THROWS_AS(validate(Tabulated{{2.0, 1.0}, {0.0, 0.0}}), std::invalid_argument);
  CHECK_THROWS_AS(validate(Tabulated{{1.0}, {0.0}}), std::invalid_argument);
}

TEST_CASE("validation rejects nonsense parameters") {
  CHECK_THROWS_AS(validate(Gaussian{1.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(validate(LennardJones{1.0, -1.0, 0.1}), std::invalid_argument);
  UnitSystem u;
  u.kinetic_coeff = 0.0;
  CHECK_THROWS_AS(u.validate(), std::invalid_argument);
}

TEST_CASE("describe names the potential") {
  CHECK(describe(Gaussian{1.0, 2.0}) == "gaussian(V0=1;sigma=2)");
  CHECK(describe(Tabulated{{1.0, 2.0}, {0.0, 0.0}}) == "tabulated(2 nodes)");
}
