#include "teps/numerov.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace teps {

double NumerovRun::sample(double rr) const {
  const double x = (rr - grid.r_min) / grid.a;
  auto i = static_cast<Eigen::Index>(std::floor(x));
  i = std::clamp<Eigen::Index>(i, 0, u.size() - 2);
  const double s = x - static_cast<double>(i);
  return (1.0 - s) * u(i) + s * u(i + 1);
}

NumerovRun numerov_integrate(const std::function<double(double)>& V, const UnitSystem& units, double E,
                             int L, const NumerovGrid& grid) {
  units.validate();
  if (!(E > 0.0)) throw std::invalid_argument("numerov: energy must be positive");
  if (L < 0) throw std::invalid_argument("numerov: L must be >= 0");
  if (!(grid.a > 0.0) || !(grid.r_max > grid.r_min + 4.0 * grid.a) || grid.r_min < 0.0)
    throw std::invalid_argument("numerov: bad grid");
  const double c = units.kinetic_coeff;
  const double k = std::sqrt(E / c);
  if (grid.a > 2.0 * std::numbers::pi / k / 20.0)
    throw std::invalid_argument("numerov: fewer than 20 points per wavelength");

  const auto n = static_cast<Eigen::Index>(std::floor((grid.r_max - grid.r_min) / grid.a)) + 1;
  Eigen::VectorXd w(n);
  const double LL = static_cast<double>(L) * (L + 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double r = grid.r_min + grid.a * static_cast<double>(i);
    w(i) = (E - V(r)) / c - (r > 0.0 ? LL / (r * r) : 0.0);
  }
  if (grid.r_min == 0.0) w(0) = 0.0;  // multiplies u(0) = 0

  NumerovRun run;
  run.grid = grid;
  run.E = E;
  run.L = L;
  run.u = Eigen::VectorXd::Zero(n);
  run.u(1) = grid.a;
  const double h = grid.a * grid.a / 12.0;
  for (Eigen::Index i = 1; i + 1 < n; ++i) {
    run.u(i + 1) = (2.0 * run.u(i) * (1.0 - 5.0 * h * w(i)) - run.u(i - 1) * (1.0 + h * w(i - 1))) /
                   (1.0 + h * w(i + 1));
    if (std::abs(run.u(i + 1)) > 1e100) {
      run.u.head(i + 2) *= 1e-100;
      run.log_scale += 100.0 * std::log(10.0);
    }
  }
  run.r_b = run.r(n - 1);
  run.r_a = run.r_b - 0.65 * 2.0 * std::numbers::pi / k;
  run.v_at_ra = std::abs(V(run.r_a));
  return run;
}

NumerovRun numerov_integrate(const PotentialSpec& pot, const UnitSystem& units, double E, int L,
                             const NumerovGrid& grid) {
  validate(pot);
  return numerov_integrate([&pot](double r) { return evaluate_potential(pot, r); }, units, E, L, grid);
}

double phase_from_matching(const NumerovRun& run, double k, double r_a, double r_b) {
  const double lambda = 2.0 * std::numbers::pi / k;
  const double last = run.r(run.u.size() - 1);
  double rb = r_b > 0.0 ? std::min(r_b, last) : last;
  const double ra = r_a > 0.0 ? r_a : rb - 0.65 * lambda;
  if (!(ra > run.grid.r_min) || !(rb > ra)) throw std::invalid_argument("numerov: bad match points");
  const auto L = static_cast<unsigned>(run.L);
  for (int attempt = 0; attempt < 5; ++attempt) {
    const double rho = run.sample(ra) * rb / (run.sample(rb) * ra);
    const double num = rho * std::sph_bessel(L, k * rb) - std::sph_bessel(L, k * ra);
    const double den = rho * std::sph_neumann(L, k * rb) - std::sph_neumann(L, k * ra);
    if (std::abs(den) >= 1e-14 && std::isfinite(rho)) return std::atan(num / den);
    rb -= 0.25 * lambda;
    if (!(rb > ra)) break;
  }
  throw std::runtime_error("numerov: matching denominator vanished");
}

double oracle_phase_shift(const PotentialSpec& pot, const UnitSystem& units, double k, int L,
                          const OracleOptions& opt) {
  validate(pot);
  units.validate();
  if (!(k > 0.0)) throw std::invalid_argument("oracle: k must be positive");
  const double c = units.kinetic_coeff;
  const double E = c * k * k;
  const double lambda = 2.0 * std::numbers::pi / k;

  double r_min = opt.r_min;
  if (r_min < 0.0)
    r_min = std::holds_alternative<LennardJones>(pot) ? 0.1 * std::get<LennardJones>(pot).sigma : 0.0;

  const double r_asym = potential_range(pot, opt.asymptotic_tol * E, r_min);
  const double r_a = std::max(r_asym, r_min + opt.min_wavelengths * lambda);
  const double r_b = r_a + 0.65 * lambda;

  double step = opt.step;
  if (step <= 0.0) {
    const double wmax = (potential_max_abs(pot, r_min, r_a) + E) / c;
    step = std::min(lambda / 400.0, 0.05 / std::sqrt(wmax));
  }

  // Precompute V once; the callable indexes into the table.
  NumerovGrid grid{step, r_min, r_b + 2.0 * step};
  const auto n = static_cast<Eigen::Index>(std::floor((grid.r_max - grid.r_min) / grid.a)) + 1;
  Eigen::VectorXd table(n);
  if (std::holds_alternative<LennardJones>(pot)) {
    const auto& lj = std::get<LennardJones>(pot);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double x = lj.sigma / std::max(r_min + step * static_cast<double>(i), lj.r_core);
      const double x6 = x * x * x * x * x * x;
      table(i) = 4.0 * lj.epsilon * (x6 * x6 - x6);
    }
  } else {
    for (Eigen::Index i = 0; i < n; ++i) table(i) = evaluate_potential(pot, r_min + step * static_cast<double>(i));
  }
  auto V = [&](double r) {
    const auto i = static_cast<Eigen::Index>(std::llround((r - r_min) / step));
    return table(std::clamp<Eigen::Index>(i, 0, n - 1));
  };
  const NumerovRun run = numerov_integrate(V, units, E, L, grid);
  return phase_from_matching(run, k, r_a, r_b);
}

CalibrationResult calibrate_kinetic_coeff(const PotentialSpec& pot, const std::vector<CalibrationRow>& rows,
                                          double c_lo, double c_hi, int L) {
  if (rows.empty()) throw std::invalid_argument("calibration: no reference rows");
  if (!(c_lo > 0.0) || !(c_hi > c_lo)) throw std::invalid_argument("calibration: bad bracket");
  auto cost = [&](double c) {
    UnitSystem u{"", "", c};
    double s = 0.0;
    for (const auto& row : rows) {
      const double d = oracle_phase_shift(pot, u, row.k, L) - row.delta;
      s += d * d;
    }
    return s;
  };
  // Golden-section search; the cost is smooth and unimodal on a tight bracket.
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = c_lo, b = c_hi;
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = cost(x1), f2 = cost(x2);
  while (b - a > 1e-5 * (std::abs(a) + std::abs(b))) {
    if (f1 < f2) {
      b = x2; x2 = x1; f2 = f1;
      x1 = b - g * (b - a); f1 = cost(x1);
    } else {
      a = x1; x1 = x2; f1 = f2;
      x2 = a + g * (b - a); f2 = cost(x2);
    }
  }
  CalibrationResult res;
  res.kinetic_coeff = 0.5 * (a + b);
  UnitSystem u{"", "", res.kinetic_coeff};
  double s = 0.0;
  for (const auto& row : rows) {
    res.predicted.push_back(oracle_phase_shift(pot, u, row.k, L));
    s += std::pow(res.predicted.back() - row.delta, 2);
  }
  res.rms = std::sqrt(s / static_cast<double>(rows.size()));
  return res;
}

}  // namespace teps
