#include "teps/phaseshift.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace teps;

namespace {
constexpr double kPi = std::numbers::pi;

ScanResult synthetic(double A, double dL, double C, int n) {
  ScanResult s;
  s.delta_V = delta_grid(n);
  for (double x : s.delta_V) s.P.push_back(A * std::pow(std::cos(x - dL), 2) + C);
  return s;
}
}  // namespace

TEST_CASE("wrap onto (-pi/2, pi/2]") {
  CHECK(wrap_half_pi(0.3) == doctest::Approx(0.3));
  CHECK(wrap_half_pi(0.3 + kPi) == doctest::Approx(0.3));
  CHECK(wrap_half_pi(-kPi / 2) == doctest::Approx(kPi / 2));
  CHECK(wrap_half_pi(kPi / 2) == doctest::Approx(kPi / 2));
  CHECK(wrap_half_pi(-1.4 - 3 * kPi) == doctest::Approx(-1.4));
}

TEST_CASE("TEPS phase inverts P = c_L^2 cos^2 delta, with clamping") {
  const double cL = 0.487;
  for (double d : {0.0, 0.2, 0.5456, 1.3}) CHECK(teps_phase(cL * cL * std::pow(std::cos(d), 2), cL) == doctest::Approx(d));
  bool clamped = false;
  CHECK(teps_phase(cL * cL * 1.04, cL, &clamped) == 0.0);
  CHECK(clamped);
  CHECK_THROWS(teps_phase(cL * cL * 1.2, cL));
  CHECK_THROWS_AS(teps_phase(-0.1, cL), std::invalid_argument);
}

TEST_CASE("plateau onset and detection") {
  CHECK(plateau_onset(2.0, 26.0, 16.0, 40.0) == doctest::Approx((26.0 + 28.0) / 2.0));
  CHECK(plateau_onset(2.0, 0.0, 0.0, 0.0, 1.0) == 0.0);
  CHECK(plateau_onset(4.0, 26.0, 16.0, 40.0, 1.0) == doctest::Approx(0.5 * plateau_onset(2.0, 26.0, 16.0, 40.0, 1.0)));
  // Gaussian{1,2}, k = 1.99, standard detector, hbar^2/2mu = 1: the observed plateau starts at t = 24.
  CHECK(plateau_onset(1.99, 26.0, 16.44, 16.44 + 23.02, 1.0) <= 24.0);
  std::vector<double> t, v;
  for (int i = 0; i < 60; ++i) {
    t.push_back(i);
    v.push_back(i < 20 ? 0.05 * i : (i < 45 ? 1.0 + 0.001 * ((i % 3) - 1) : 1.0 + 0.2 * (i - 44)));
  }
  const auto p = detect_plateau(t, v, 5, 1e-4, 0.0);
  REQUIRE(p);
  CHECK(p->t_a == doctest::Approx(20.0));
  CHECK(p->t_b == doctest::Approx(44.0));
  CHECK(average_plateau(v, *p).mean == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(detect_plateau(t, v, 5, 1e-4, 30.0)->t_a == doctest::Approx(30.0));
}

TEST_CASE("cos^2 fit recovers amplitude, phase and offset") {
  const auto clean = synthetic(0.3, -0.33, 0.0, 20);
  const auto f = fit_cos2(clean, false);
  REQUIRE(f.maximizer);
  CHECK(*f.maximizer == doctest::Approx(-0.33).epsilon(1e-8));
  CHECK(f.A == doctest::Approx(0.3).epsilon(1e-8));
  const auto off = fit_cos2(synthetic(0.3, -0.33, 0.07, 20), true);
  CHECK(*off.maximizer == doctest::Approx(-0.33).epsilon(1e-8));
  REQUIRE(off.C);
  CHECK(*off.C == doctest::Approx(0.07).epsilon(1e-8));
  // a constant offset moves neither the grid argmax nor the fitted maximizer
  CHECK(grid_argmax(synthetic(0.3, 0.9, 0.2, 100)) == grid_argmax(synthetic(0.3, 0.9, 0.0, 100)));
  CHECK_THROWS_AS(fit_cos2(synthetic(1.0, 0.0, 0.0, 4), false), std::invalid_argument);
}

TEST_CASE("shot sampling is binomial and seeded") {
  std::mt19937_64 a(5), b(5);
  CHECK(sample_probability(0.3, 1000, a) == sample_probability(0.3, 1000, b));
  std::mt19937_64 rng(1);
  double m = 0.0;
  for (int i = 0; i < 2000; ++i) m += sample_probability(0.3, 1000, rng);
  CHECK(m / 2000 == doctest::Approx(0.3).epsilon(2e-3));
}

TEST_CASE("delta grid and cross section") {
  const auto g = delta_grid(100);
  CHECK(g.front() == doctest::Approx(-kPi / 2));
  CHECK(g[1] - g[0] == doctest::Approx(kPi / 100));
  CHECK(cross_section_L(kPi / 2, 1.0, 0) == doctest::Approx(4 * kPi));
  CHECK(cross_section_L(0.3, 2.0, 1) == doctest::Approx(12 * kPi * std::pow(std::sin(0.3), 2) / 4));
}

TEST_CASE("V-TEPS scan on a synthetic shifted wave finds the injected phase") {
  LatticeBasis lb;
  lb.a = 0.01;
  lb.points = 4000;
  const double k = 2.0, dL = -0.41;
  WaveState psi;
  psi.amplitudes.resize(lb.points);
  for (Eigen::Index m = 0; m < lb.points; ++m) psi.amplitudes(m) = std::sin(k * lb.node(m) + dL);
  psi.amplitudes.normalize();
  psi.k_label = k;
  const auto grid = delta_grid(60);
  const auto scan = vteps_scan(psi, Basis{lb}, k, 0, 3, 9, grid);
  CHECK(*fit_cos2(scan, false).maximizer == doctest::Approx(dL).epsilon(2e-3));
}
