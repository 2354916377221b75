#pragma once

#include "teps/waves.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace teps {

struct Interval {
  double t_a = 0.0;
  double t_b = 0.0;
  std::size_t i_a = 0;  // inclusive sample indices
  std::size_t i_b = 0;
};

struct PhaseSeries {
  std::vector<double> times;
  std::vector<double> P;
  std::vector<double> delta_abs;
  std::optional<Interval> plateau;
};

struct ScanResult {
  std::vector<double> delta_V;
  std::vector<double> P;
  std::optional<long> shots;
};

struct FitResult {
  double A = 0.0;
  double B = 0.0;
  std::optional<double> C;
  double sigma_A = 0.0;
  double sigma_B = 0.0;
  double sigma_C = 0.0;
  Eigen::MatrixXd covariance;
  double residual = 0.0;  // sum of squared residuals
  int iterations = 0;
  bool degenerate = false;
  std::optional<double> maximizer;  // -B mapped to (-pi/2, pi/2]

  double value(double delta_V) const;
};

// Map an angle onto (-pi/2, pi/2] modulo pi.
double wrap_half_pi(double x);

double overlap_probability(const WaveState& detector, const WaveState& psi);

// |delta| = arccos(sqrt(P)/c_L); ratios up to 1.05 are clamped and flagged through *clamped.
inline constexpr double kClampTolerance = 5e-2;
double teps_phase(double P, double c_L, bool* clamped = nullptr);

// Free-wave travel time from r0 to the origin and back to the detector middle, at group velocity
// dE/dk = 2 c k with c = hbar^2/2mu. For c = 1/2 this is (r0 + r_d)/k_in.
double plateau_onset(double k_in, double r0, double r1, double r2, double kinetic_coeff = 0.5);

inline constexpr double kPlateauVarTol = 0.02 * 0.02;
std::optional<Interval> detect_plateau(const PhaseSeries& series, std::size_t window, double var_tol = kPlateauVarTol,
                                       double t_onset = 0.0);
std::optional<Interval> detect_plateau(const std::vector<double>& times, const std::vector<double>& values,
                                       std::size_t window, double var_tol = kPlateauVarTol, double t_onset = 0.0);

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};
MeanStd average_plateau(const std::vector<double>& values, const Interval& interval);
MeanStd average_plateau(const PhaseSeries& series, const Interval& interval);

// Detectors for every delta_V of a scan; reusable across evolution times.
std::vector<WaveState> detector_family(const Basis& basis, double k_in, int L, int n_i, int n_f,
                                       const std::vector<double>& grid, const DetectorGuard& guard = {},
                                       double edge_gamma = 0.0);

ScanResult scan_probabilities(const WaveState& psi, const std::vector<WaveState>& detectors,
                              const std::vector<double>& grid, std::optional<long> shots = std::nullopt,
                              std::uint64_t seed = 0);

ScanResult vteps_scan(const WaveState& psi_t, const Basis& basis, double k_in, int L, int n_i, int n_f,
                      const std::vector<double>& grid, std::optional<long> shots = std::nullopt,
                      std::uint64_t seed = 0, const DetectorGuard& guard = {}, double edge_gamma = 0.0);

// Uniform grid of n points covering [-pi/2, pi/2).
std::vector<double> delta_grid(int n);

// Binomial estimate of a probability from a finite number of shots.
double sample_probability(double p, long shots, std::mt19937_64& rng);

FitResult fit_cos2(const ScanResult& scan, bool with_offset);

double grid_argmax(const ScanResult& scan);

double cross_section_L(double delta, double k_in, int L);

struct PeakShift {
  double r_free = 0.0;
  double r_full = 0.0;
  double delta = 0.0;
  double sigma = 0.0;
};
std::vector<PeakShift> peak_shift_phase(const WaveState& psi_t, const WaveState& free_wave, const LatticeBasis& basis,
                                        double k_in, double r_lo, double r_hi);

}  // namespace teps
