#include "teps/waves.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace teps;

TEST_CASE("filters") {
  CHECK(filter_value(FermiFilter{26.0, 2.0}, 26.0) == doctest::Approx(0.5));
  CHECK(filter_value(FermiFilter{26.0, 2.0}, 80.0) == doctest::Approx(1.0));
  CHECK(filter_value(FermiFilter{26.0, 2.0}, 0.0) < 1e-5);
  const ErfFilter e{100.0, 400.0, 20.0, 1.0};
  CHECK(filter_value(e, 250.0) == doctest::Approx(1.0));
  CHECK(filter_value(e, 100.0) == doctest::Approx(0.5).epsilon(1e-6));
  CHECK_THROWS_AS(validate(ErfFilter{3.0, 1.0, 1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("detector window follows r = (2 pi n + delta_V)/k") {
  const auto d = make_detector_spec(1.5, 0, 3, 7, 0.2);
  CHECK(d.r1 == doctest::Approx((6 * std::numbers::pi + 0.2) / 1.5));
  CHECK(d.r2 == doctest::Approx((14 * std::numbers::pi + 0.2) / 1.5));
  CHECK(d.n_d == 4);
  CHECK_THROWS_AS(make_detector_spec(1.5, 0, 3, 3), std::invalid_argument);
  // standard targets r1 = 16.44, width = 23.02 at k_in = 1.7273
  const auto [ni, nf] = window_integers(1.7273, 16.44, 23.02);
  CHECK(ni == 5);
  CHECK(nf == 11);
}

TEST_CASE("lattice states are normalized and carry the raw norms") {
  LatticeBasis lb;
  lb.a = 0.04;
  lb.points = 3000;
  const Basis b = lb;
  const double k = nearest_kinetic_momentum(b, UnitSystem{}, 1.73);
  const auto psi = prepare_initial(b, k, 0, FermiFilter{26.0, 2.0});
  CHECK(psi.computed_norm() == doctest::Approx(1.0));
  auto spec = make_detector_spec(k, 0, 5, 11);
  const auto det = prepare_detector(b, spec);
  CHECK(det.computed_norm() == doctest::Approx(1.0));
  // a box of n_d periods of sin^2 integrates to n_d * pi / k
  CHECK(spec.c_dect * spec.c_dect == doctest::Approx(6 * std::numbers::pi / k).epsilon(2e-3));
  const auto n = normalizations(psi, spec, b);
  CHECK(n.c_L == doctest::Approx(n.c_dect / n.c_init));
  CHECK(n.c_L == doctest::Approx(0.487).epsilon(2e-3));
}

TEST_CASE("detector guards") {
  LatticeBasis lb;
  lb.a = 0.02;
  lb.points = 1000;
  auto spec = make_detector_spec(2.0, 0, 1, 5);
  CHECK_THROWS_AS(prepare_detector(Basis{lb}, spec, DetectorGuard{5.0, 0.2}), std::invalid_argument);
  auto far = make_detector_spec(2.0, 0, 5, 6);
  CHECK_THROWS_AS(prepare_detector(Basis{lb}, far), std::invalid_argument);
}

TEST_CASE("bessel-basis initial state is S-normalized") {
  const auto bb = make_bessel_basis(BesselParams{});
  const Basis b = bb;
  const auto psi = prepare_initial(b, 0.35208, 0, FermiFilter{110.0, 20.0});
  CHECK(psi.computed_norm() == doctest::Approx(1.0));
  CHECK(psi.metric != nullptr);
  CHECK_THROWS_AS(prepare_initial(b, 0.35, 1, FermiFilter{}), std::invalid_argument);
}
