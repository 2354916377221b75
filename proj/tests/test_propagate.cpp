#include "teps/propagate.hpp"

#include <doctest.h>

#include <cmath>

using namespace teps;

namespace {

struct Fixture {
  LatticeBasis lb;
  HamiltonianMatrix H;
  WaveState psi;
  Fixture() {
    lb.a = 0.05;
    lb.points = 600;
    H = build_lattice_hamiltonian(lb, Gaussian{1.0, 2.0}, UnitSystem{}, 0);
    psi = prepare_initial(Basis{lb}, 1.4, 0, FermiFilter{8.0, 1.0});
  }
};

PropagatorSpec with(PropagatorSpec::Method m) {
  PropagatorSpec s;
  s.method = m;
  return s;
}

}  // namespace

TEST_CASE("krylov and spectral propagation agree") {
  Fixture f;
  const auto a = evolve(f.psi, f.H, 6.0, with(PropagatorSpec::Method::Krylov));
  const auto b = evolve(f.psi, f.H, 6.0, with(PropagatorSpec::Method::Spectral));
  CHECK((a.amplitudes - b.amplitudes).norm() < 1e-9);
  CHECK(a.amplitudes.norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("composition and energy conservation") {
  Fixture f;
  const auto kry = with(PropagatorSpec::Method::Krylov);
  const auto full = evolve(f.psi, f.H, 5.0, kry);
  const auto split = evolve(evolve(f.psi, f.H, 2.0, kry), f.H, 3.0, kry);
  CHECK((full.amplitudes - split.amplitudes).norm() < 1e-9);
  const double e0 = energy_expectation(f.psi, f.H);
  CHECK(energy_expectation(full, f.H) == doctest::Approx(e0).epsilon(1e-10));
}

TEST_CASE("series evaluation matches single calls and t = 0 is the identity") {
  Fixture f;
  const std::vector<double> ts{0.0, 1.5, 4.0};
  const auto series = evolve_series(f.psi, f.H, ts, with(PropagatorSpec::Method::Krylov));
  REQUIRE(series.size() == 3);
  CHECK((series[0].amplitudes - f.psi.amplitudes).norm() < 1e-14);
  CHECK((series[2].amplitudes - evolve(f.psi, f.H, 4.0).amplitudes).norm() < 1e-9);
}

TEST_CASE("auto method switches at the spectral threshold") {
  Fixture f;
  CHECK(uses_spectral(f.H, PropagatorSpec{}));
  LatticeBasis big;
  big.points = 2000;
  const auto Hb = build_lattice_hamiltonian(big, Gaussian{}, UnitSystem{}, 0);
  CHECK_FALSE(uses_spectral(Hb, PropagatorSpec{}));
  CHECK(uses_spectral(Hb, with(PropagatorSpec::Method::Spectral)));
}

TEST_CASE("eigenstates only acquire a phase") {
  Fixture f;
  const auto d = decompose(f.H);
  WaveState e = f.psi;
  e.amplitudes = d.vectors.col(10).cast<std::complex<double>>();
  const auto out = evolve(e, d, 3.0);
  const std::complex<double> ph = std::exp(std::complex<double>(0.0, -d.energies(10) * 3.0));
  CHECK((out.amplitudes - ph * e.amplitudes).norm() < 1e-12);
}
