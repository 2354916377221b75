#include "teps/numerov.hpp"

#include <doctest.h>

#include <cmath>

using namespace teps;

namespace {
double gauss(double V0, double s, double k) { return oracle_phase_shift(Gaussian{V0, s}, UnitSystem{}, k, 0); }
}  // namespace

TEST_CASE("frozen Gaussian phase shifts") {
  CHECK(gauss(1, 2, 1.466) == doctest::Approx(-0.6508).epsilon(2e-4));
  CHECK(gauss(1, 2, 1.73) == doctest::Approx(-0.5456).epsilon(2e-4));
  CHECK(gauss(1, 2, 2.252) == doctest::Approx(-0.4087).epsilon(2e-4));
  CHECK(gauss(1, 2, 2.67) == doctest::Approx(-0.3408).epsilon(2e-4));
  CHECK(gauss(1, 2, 0.351) == doctest::Approx(-0.49955).epsilon(2e-4));
  CHECK(gauss(2, 4, 1.86) == doctest::Approx(0.9703).epsilon(2e-4));
  CHECK(gauss(2, 4, 2.51) == doctest::Approx(-1.5044).epsilon(2e-4));
  CHECK(gauss(2, 4, 1.9107) == doctest::Approx(1.0463).epsilon(2e-4));
}

TEST_CASE("frozen Lennard-Jones phase shifts, calibrated kinetic coefficient") {
  UnitSystem u;
  u.kinetic_coeff = 2.117;
  const LennardJones lj;
  CHECK(oracle_phase_shift(lj, u, 0.602, 0) == doctest::Approx(0.7532).epsilon(3e-4));
  CHECK(oracle_phase_shift(lj, u, 0.8639, 0) == doctest::Approx(-0.5436).epsilon(3e-4));
  CHECK(oracle_phase_shift(lj, u, 1.19, 0) == doctest::Approx(1.1317).epsilon(3e-4));
}

TEST_CASE("free particle has zero phase shift") {
  CHECK(std::abs(gauss(0.0, 2.0, 1.1)) < 1e-6);
  CHECK(std::abs(oracle_phase_shift(Gaussian{0.0, 2.0}, UnitSystem{}, 0.7, 2)) < 1e-5);
}

TEST_CASE("square barrier matches the closed form") {
  const double V0 = 0.5, R = 3.0, k = 1.2;
  const PotentialSpec well = Tabulated{{R, R + 1e-9}, {V0, 0.0}};
  const double kappa = std::sqrt(k * k - V0);
  double expected = std::atan(k / kappa * std::tan(kappa * R)) - k * R;
  expected = std::remainder(expected, M_PI);
  if (expected <= -M_PI / 2) expected += M_PI;
  CHECK(oracle_phase_shift(well, UnitSystem{}, k, 0) == doctest::Approx(expected).epsilon(1e-4));
}

TEST_CASE("calibration recovers a known kinetic coefficient") {
  UnitSystem u;
  u.kinetic_coeff = 1.7;
  const Gaussian g{1.0, 2.0};
  std::vector<CalibrationRow> rows;
  for (double k : {0.8, 1.3, 1.9}) rows.push_back({k, oracle_phase_shift(g, u, k, 0)});
  const auto c = calibrate_kinetic_coeff(g, rows, 1.0, 3.0);
  CHECK(c.kinetic_coeff == doctest::Approx(1.7).epsilon(1e-4));
  CHECK(c.rms < 1e-5);
}

TEST_CASE("raw integration exposes the wave function") {
  NumerovGrid grid;
  grid.a = 1e-3;
  grid.r_max = 20.0;
  const auto run = numerov_integrate(Gaussian{0.0, 1.0}, UnitSystem{}, 1.0, 0, grid);
  // free s-wave: u(r) proportional to sin(r)
  const double ratio = run.sample(2.0) / run.sample(1.0);
  CHECK(ratio == doctest::Approx(std::sin(2.0) / std::sin(1.0)).epsilon(1e-6));
  CHECK(phase_from_matching(run, 1.0) == doctest::Approx(0.0).epsilon(1e-6));
}
