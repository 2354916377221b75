#pragma once

#include "teps/units.hpp"

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace teps {

struct NumerovGrid {
  double a = 1e-3;
  double r_min = 0.0;
  double r_max = 40.0;
};

struct NumerovRun {
  NumerovGrid grid;
  double E = 0.0;
  int L = 0;
  Eigen::VectorXd u;
  double r_a = 0.0;
  double r_b = 0.0;
  double log_scale = 0.0;  // accumulated ln of renormalization factors
  double v_at_ra = 0.0;    // |V| at the inner match point

  double r(Eigen::Index i) const { return grid.r_min + grid.a * static_cast<double>(i); }
  double sample(double r) const;  // linear interpolation
};

// Outward Numerov integration of u'' = -(E - V - c L(L+1)/r^2)/c u with u(r_min)=0.
NumerovRun numerov_integrate(const std::function<double(double)>& V, const UnitSystem& units, double E,
                             int L, const NumerovGrid& grid);
NumerovRun numerov_integrate(const PotentialSpec& pot, const UnitSystem& units, double E, int L,
                             const NumerovGrid& grid);

// Principal-value phase shift from two match points; r_b <= 0 picks the last node and
// r_a <= 0 picks r_b - 0.65 wavelengths.
double phase_from_matching(const NumerovRun& run, double k, double r_a = -1.0, double r_b = -1.0);

struct OracleOptions {
  double step = 0.0;          // 0: automatic
  double r_min = -1.0;        // < 0: 0 for Gaussian/tabulated, 0.1 sigma for Lennard-Jones
  double asymptotic_tol = 1e-10;  // |V| < tol * E at the inner match point
  double min_wavelengths = 4.0;   // matching region starts at least this many wavelengths out
};

// Convenience: choose grid and match points automatically and return delta_L(k).
double oracle_phase_shift(const PotentialSpec& pot, const UnitSystem& units, double k, int L,
                          const OracleOptions& opt = {});

// Least-squares tuning of hbar^2/2mu so oracle phases match reference (k, delta) rows.
struct CalibrationRow {
  double k;
  double delta;
};
struct CalibrationResult {
  double kinetic_coeff;
  double rms;
  std::vector<double> predicted;
};
CalibrationResult calibrate_kinetic_coeff(const PotentialSpec& pot, const std::vector<CalibrationRow>& rows,
                                          double c_lo, double c_hi, int L = 0);

}  // namespace teps
