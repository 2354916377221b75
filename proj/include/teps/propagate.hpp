#pragma once

#include "teps/basis.hpp"
#include "teps/waves.hpp"

#include <vector>

namespace teps {

struct KrylovSpec {
  int dim = 30;
  double dt = 0.0;        // initial step; 0 lets the error estimate pick it
  double tol = 1e-12;     // per-step a-posteriori error bound
  long max_steps = 50'000'000;
};

struct PropagatorSpec {
  enum class Method { Auto, Spectral, Krylov };
  Method method = Method::Auto;
  KrylovSpec krylov;
  // Auto uses the spectral route up to this many lattice points. Bessel bases are always spectral.
  Eigen::Index spectral_max_points = 1024;
};

WaveState evolve(const WaveState& state, const SpectralDecomposition& d, double t);
WaveState evolve(const WaveState& state, const HamiltonianMatrix& H, double t, const PropagatorSpec& spec = {});

std::vector<WaveState> evolve_series(const WaveState& state, const SpectralDecomposition& d,
                                     const std::vector<double>& times);
std::vector<WaveState> evolve_series(const WaveState& state, const HamiltonianMatrix& H,
                                     const std::vector<double>& times, const PropagatorSpec& spec = {});

// Lanczos short-iterative propagation of a raw vector by exp(-i H t); H must be a lattice matrix.
Eigen::VectorXcd krylov_propagate(const HamiltonianMatrix& H, const Eigen::VectorXcd& v, double t,
                                  const KrylovSpec& spec = {});

double energy_expectation(const WaveState& state, const HamiltonianMatrix& H);

bool uses_spectral(const HamiltonianMatrix& H, const PropagatorSpec& spec);

}  // namespace teps
