#include "teps/phaseshift.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace teps {

namespace {
constexpr double kPi = std::numbers::pi;
}

double FitResult::value(double x) const {
  const double c = std::cos(x + B);
  return A * c * c + C.value_or(0.0);
}

double wrap_half_pi(double x) {
  double y = std::fmod(x + kPi / 2.0, kPi);
  if (y <= 0.0) y += kPi;
  return y - kPi / 2.0;  // (-pi/2, pi/2]
}

double overlap_probability(const WaveState& detector, const WaveState& psi) {
  return std::norm(inner(detector, psi));
}

double teps_phase(double P, double c_L, bool* clamped) {
  if (!(c_L > 0.0)) throw std::invalid_argument("teps_phase: c_L must be positive");
  if (P < 0.0) throw std::invalid_argument("teps_phase: negative probability");
  const double ratio = std::sqrt(P) / c_L;
  if (clamped) *clamped = ratio > 1.0;
  if (ratio > 1.0 + kClampTolerance)
    throw std::runtime_error("teps_phase: sqrt(P)/c_L exceeds 1 beyond tolerance (inconsistent normalization)");
  return std::acos(std::min(ratio, 1.0));
}

double plateau_onset(double k_in, double r0, double r1, double r2, double kinetic_coeff) {
  if (!(k_in > 0.0)) throw std::invalid_argument("plateau_onset: k_in must be positive");
  if (!(kinetic_coeff > 0.0)) throw std::invalid_argument("plateau_onset: kinetic_coeff must be positive");
  return (r0 + 0.5 * (r1 + r2)) / (2.0 * kinetic_coeff * k_in);
}

std::optional<Interval> detect_plateau(const std::vector<double>& times, const std::vector<double>& values,
                                       std::size_t window, double var_tol, double t_onset) {
  const std::size_t n = values.size();
  if (times.size() != n) throw std::invalid_argument("detect_plateau: size mismatch");
  if (window < 2 || n < window) throw std::invalid_argument("detect_plateau: need at least `window` points");
  std::vector<char> flat(n - window + 1, 0);
  for (std::size_t i = 0; i + window <= n; ++i) {
    if (times[i] < t_onset) continue;
    double m = 0.0, s = 0.0;
    for (std::size_t j = i; j < i + window; ++j) m += values[j];
    m /= static_cast<double>(window);
    for (std::size_t j = i; j < i + window; ++j) s += (values[j] - m) * (values[j] - m);
    flat[i] = (s / static_cast<double>(window)) <= var_tol;
  }
  std::optional<Interval> best;
  std::size_t i = 0;
  while (i < flat.size()) {
    if (!flat[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < flat.size() && flat[j + 1]) ++j;
    const std::size_t a = i, b = j + window - 1;
    if (!best || b - a > best->i_b - best->i_a) best = Interval{times[a], times[b], a, b};
    i = j + 1;
  }
  return best;
}

std::optional<Interval> detect_plateau(const PhaseSeries& series, std::size_t window, double var_tol, double t_onset) {
  return detect_plateau(series.times, series.delta_abs, window, var_tol, t_onset);
}

MeanStd average_plateau(const std::vector<double>& values, const Interval& iv) {
  if (iv.i_b < iv.i_a || iv.i_b >= values.size()) throw std::invalid_argument("average_plateau: bad interval");
  const auto first = values.begin() + static_cast<std::ptrdiff_t>(iv.i_a);
  const auto last = values.begin() + static_cast<std::ptrdiff_t>(iv.i_b) + 1;
  const double n = static_cast<double>(last - first);
  const double m = std::accumulate(first, last, 0.0) / n;
  double s = 0.0;
  for (auto it = first; it != last; ++it) s += (*it - m) * (*it - m);
  return {m, std::sqrt(s / n)};
}

MeanStd average_plateau(const PhaseSeries& series, const Interval& iv) { return average_plateau(series.delta_abs, iv); }

std::vector<WaveState> detector_family(const Basis& basis, double k_in, int L, int n_i, int n_f,
                                       const std::vector<double>& grid, const DetectorGuard& guard,
                                       double edge_gamma) {
  std::vector<WaveState> out;
  out.reserve(grid.size());
  for (double dv : grid) {
    DetectorSpec d = make_detector_spec(k_in, L, n_i, n_f, dv);
    d.edge_gamma = edge_gamma;
    out.push_back(prepare_detector(basis, d, guard));
  }
  return out;
}

double sample_probability(double p, long shots, std::mt19937_64& rng) {
  if (shots <= 0) throw std::invalid_argument("shots must be positive");
  std::binomial_distribution<long> dist(shots, std::clamp(p, 0.0, 1.0));
  return static_cast<double>(dist(rng)) / static_cast<double>(shots);
}

ScanResult scan_probabilities(const WaveState& psi, const std::vector<WaveState>& detectors,
                              const std::vector<double>& grid, std::optional<long> shots, std::uint64_t seed) {
  if (detectors.size() != grid.size()) throw std::invalid_argument("scan: detector/grid size mismatch");
  ScanResult s;
  s.delta_V = grid;
  s.shots = shots;
  s.P.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) s.P[i] = std::min(1.0, overlap_probability(detectors[i], psi));
  if (shots) {
    std::mt19937_64 rng(seed);
    for (double& p : s.P) p = sample_probability(p, *shots, rng);
  }
  return s;
}

ScanResult vteps_scan(const WaveState& psi_t, const Basis& basis, double k_in, int L, int n_i, int n_f,
                      const std::vector<double>& grid, std::optional<long> shots, std::uint64_t seed,
                      const DetectorGuard& guard, double edge_gamma) {
  return scan_probabilities(psi_t, detector_family(basis, k_in, L, n_i, n_f, grid, guard, edge_gamma), grid, shots,
                            seed);
}

std::vector<double> delta_grid(int n) {
  if (n < 1) throw std::invalid_argument("delta_grid: n must be positive");
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = -kPi / 2.0 + kPi * i / n;
  return g;
}

double grid_argmax(const ScanResult& scan) {
  if (scan.P.empty()) throw std::invalid_argument("grid_argmax: empty scan");
  const auto it = std::max_element(scan.P.begin(), scan.P.end());
  return scan.delta_V[static_cast<std::size_t>(it - scan.P.begin())];
}

FitResult fit_cos2(const ScanResult& scan, bool with_offset) {
  const std::size_t n = scan.P.size();
  if (n < 5 || scan.delta_V.size() != n) throw std::invalid_argument("fit_cos2: need at least 5 points");
  const auto [lo, hi] = std::minmax_element(scan.delta_V.begin(), scan.delta_V.end());
  if (*hi - *lo < kPi / 2.0 - 1e-12) throw std::invalid_argument("fit_cos2: grid must span half a period");
  const int np = with_offset ? 3 : 2;

  // Initial guess from the second harmonic: P ~ a + b cos(2x + 2B).
  std::complex<double> z = 0.0;
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    z += scan.P[i] * std::exp(std::complex<double>(0.0, 2.0 * scan.delta_V[i]));
    mean += scan.P[i];
  }
  mean /= static_cast<double>(n);
  Eigen::VectorXd p(np);
  p(1) = -std::arg(z) / 2.0;
  p(0) = 4.0 * std::abs(z) / static_cast<double>(n);
  if (with_offset) p(2) = mean - p(0) / 2.0;
  else p(0) = std::max(p(0), 2.0 * mean);

  auto residuals = [&](const Eigen::VectorXd& q, Eigen::VectorXd& r, Eigen::MatrixXd* J) {
    r.resize(static_cast<Eigen::Index>(n));
    if (J) J->resize(static_cast<Eigen::Index>(n), np);
    for (std::size_t i = 0; i < n; ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      const double ph = scan.delta_V[i] + q(1);
      const double c = std::cos(ph);
      r(ii) = q(0) * c * c + (with_offset ? q(2) : 0.0) - scan.P[i];
      if (J) {
        (*J)(ii, 0) = c * c;
        (*J)(ii, 1) = -q(0) * std::sin(2.0 * ph);
        if (with_offset) (*J)(ii, 2) = 1.0;
      }
    }
  };

  // Levenberg-Marquardt with diagonal scaling.
  Eigen::VectorXd r;
  Eigen::MatrixXd J;
  residuals(p, r, &J);
  double cost = r.squaredNorm();
  double mu = 1e-3;
  int it = 0;
  bool converged = false;
  for (; it < 500 && !converged; ++it) {
    const Eigen::MatrixXd JtJ = J.transpose() * J;
    const Eigen::VectorXd g = J.transpose() * r;
    if (g.cwiseAbs().maxCoeff() < 1e-15) break;
    bool improved = false;
    for (int inner_it = 0; inner_it < 60; ++inner_it) {
      Eigen::MatrixXd Am = JtJ;
      Am.diagonal() += mu * JtJ.diagonal().cwiseMax(1e-12);
      const Eigen::VectorXd step = Am.ldlt().solve(-g);
      const Eigen::VectorXd q = p + step;
      Eigen::VectorXd rq;
      residuals(q, rq, nullptr);
      const double cq = rq.squaredNorm();
      if (cq <= cost) {
        const double rel = step.norm() / (p.norm() + 1e-300);
        p = q;
        const double drop = cost - cq;
        cost = cq;
        mu = std::max(mu / 3.0, 1e-12);
        improved = true;
        residuals(p, r, &J);
        converged = rel < 1e-15 || drop <= 1e-30 * std::max(cost, 1e-300);
        break;
      }
      mu *= 4.0;
    }
    if (!improved) break;
  }

  FitResult f;
  f.iterations = it;
  residuals(p, r, &J);
  f.residual = r.squaredNorm();
  // Canonical form A > 0.
  if (p(0) < 0.0 && with_offset) {
    p(2) += p(0);
    p(0) = -p(0);
    p(1) += kPi / 2.0;
  }
  f.A = p(0);
  f.B = wrap_half_pi(p(1));
  if (with_offset) f.C = p(2);

  const double dof = static_cast<double>(n) - np;
  const double s2 = dof > 0 ? f.residual / dof : 0.0;
  Eigen::VectorXd pc = p;
  pc(1) = f.B;
  residuals(pc, r, &J);
  const Eigen::MatrixXd JtJ = J.transpose() * J;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(JtJ);
  if (lu.isInvertible()) {
    f.covariance = s2 * lu.inverse();
    f.sigma_A = std::sqrt(std::max(0.0, f.covariance(0, 0)));
    f.sigma_B = std::sqrt(std::max(0.0, f.covariance(1, 1)));
    if (with_offset) f.sigma_C = std::sqrt(std::max(0.0, f.covariance(2, 2)));
  } else {
    f.covariance = Eigen::MatrixXd::Constant(np, np, std::numeric_limits<double>::infinity());
    f.sigma_A = f.sigma_B = f.sigma_C = std::numeric_limits<double>::infinity();
  }
  f.degenerate = !(f.A > 0.0) || !(f.A > 2.0 * f.sigma_A) || !std::isfinite(f.sigma_B);
  if (!f.degenerate) f.maximizer = wrap_half_pi(-f.B);
  return f;
}

double cross_section_L(double delta, double k_in, int L) {
  if (!(k_in > 0.0)) throw std::invalid_argument("cross_section_L: k_in must be positive");
  const double s = std::sin(delta);
  return 4.0 * kPi * (2.0 * L + 1.0) * s * s / (k_in * k_in);
}

std::vector<PeakShift> peak_shift_phase(const WaveState& psi_t, const WaveState& free_wave, const LatticeBasis& basis,
                                        double k_in, double r_lo, double r_hi) {
  if (psi_t.amplitudes.size() != basis.points || free_wave.amplitudes.size() != basis.points)
    throw std::invalid_argument("peak_shift_phase: states must live on the lattice");
  auto peaks = [&](const Eigen::VectorXcd& v) {
    std::vector<double> out;
    for (Eigen::Index m = 1; m + 1 < v.size(); ++m) {
      const double r = basis.node(m);
      if (r < r_lo || r > r_hi) continue;
      const double x = std::abs(v(m));
      if (x > std::abs(v(m - 1)) && x >= std::abs(v(m + 1))) out.push_back(r);
    }
    return out;
  };
  const auto pf = peaks(free_wave.amplitudes);
  const auto pp = peaks(psi_t.amplitudes);
  const std::size_t np = std::min(pf.size(), pp.size());
  if (np < 2) throw std::runtime_error("peak_shift_phase: fewer than 2 peaks in the asymptotic region");
  std::vector<PeakShift> res;
  for (std::size_t i = 0; i < np; ++i)
    res.push_back({pf[i], pp[i], wrap_half_pi(k_in * (pf[i] - pp[i])), 0.5 * k_in * basis.a});
  return res;
}

}  // namespace teps
