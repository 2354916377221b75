#pragma once

#include "teps/basis.hpp"

#include <Eigen/Dense>

#include <complex>
#include <memory>
#include <variant>

namespace teps {

struct FermiFilter {
  double r0 = 26.0;
  double gamma = 2.0;
};

struct ErfFilter {
  double r1 = 0.0;
  double r2 = 1.0;
  double gamma = 1.0;
  double amplitude = 1.0;
};

using FilterSpec = std::variant<FermiFilter, ErfFilter>;

void validate(const FilterSpec& f);
double filter_value(const FilterSpec& f, double r);

struct WaveState {
  Eigen::VectorXcd amplitudes;
  int L = 0;
  double k_label = 0.0;
  double norm = 1.0;      // norm of amplitudes in the basis metric
  double raw_norm = 0.0;  // sqrt of the integral of the unnormalized target (c_init / c_dect)
  std::shared_ptr<const Eigen::MatrixXd> metric;  // overlap matrix; null means identity

  double computed_norm() const;
};

std::complex<double> inner(const WaveState& a, const WaveState& b);

// Window [r1, r2] for integers n_i < n_f: r = (2 pi n + delta_V) / k_in.
struct DetectorSpec {
  double r1 = 0.0;
  double r2 = 0.0;
  int n_d = 0;
  double delta_V = 0.0;
  int L = 0;
  double k_in = 1.0;
  double c_dect = 0.0;
  double edge_gamma = 0.0;  // 0: sharp box; > 0: erf edges of this width (Bessel bases)
};

DetectorSpec make_detector_spec(double k_in, int L, int n_i, int n_f, double delta_V = 0.0);
// Integer window from physical targets: n_i = round(r1 / lambda), n_f = n_i + round(width / lambda).
std::pair<int, int> window_integers(double k_in, double r1_target, double width_target);

struct DetectorGuard {
  double inner_limit = 0.0;   // r1 must not fall below this (interaction region)
  double wall_margin = 0.2;   // r2 must stay below (1 - wall_margin) * R_max
};

struct NormalizationSet {
  double c_init = 0.0;
  double c_dect = 0.0;
  double c_L = 0.0;  // P = c_L^2 cos^2(delta)
};

double basis_extent(const Basis& basis);

WaveState prepare_initial(const Basis& basis, double k_in, int L, const FilterSpec& f);
WaveState prepare_detector(const Basis& basis, DetectorSpec& spec, const DetectorGuard& guard = {});
NormalizationSet normalizations(const WaveState& initial, const DetectorSpec& detector, const Basis& basis);

// Snapped window actually used on a lattice, as node indices [m1, m2].
std::pair<Eigen::Index, Eigen::Index> lattice_window(const LatticeBasis& lb, double r1, double r2);

}  // namespace teps
