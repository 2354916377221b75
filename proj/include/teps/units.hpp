#pragma once

#include <Eigen/Dense>

#include <string>
#include <variant>
#include <vector>

namespace teps {

// hbar = 1, so time is measured in inverse energy units.
struct UnitSystem {
  std::string length_unit = "fm";
  std::string energy_unit = "MeV";
  double kinetic_coeff = 1.0;  // hbar^2 / 2 mu

  void validate() const;
};

struct Gaussian {
  double V0 = 1.0;
  double sigma = 2.0;
};

// 12-6 form with a flat core for r <= r_core.
struct LennardJones {
  double epsilon = 5.9;
  double sigma = 3.57;
  double r_core = 0.4 * 3.57;
};

// Piecewise linear table, zero beyond the last node, flat before the first.
struct Tabulated {
  std::vector<double> r;
  std::vector<double> V;
};

using PotentialSpec = std::variant<Gaussian, LennardJones, Tabulated>;

void validate(const PotentialSpec& spec);

double evaluate_potential(const PotentialSpec& spec, double r);

template <typename Derived>
Eigen::ArrayXd evaluate_potential(const PotentialSpec& spec, const Eigen::ArrayBase<Derived>& r) {
  Eigen::ArrayXd out(r.size());
  for (Eigen::Index i = 0; i < r.size(); ++i) out(i) = evaluate_potential(spec, r(i));
  return out;
}

// Radius beyond which |V(r)| <= tol (searched outward from r_start).
double potential_range(const PotentialSpec& spec, double tol, double r_start = 0.0);

// Largest |V| on [r_lo, r_hi], sampled.
double potential_max_abs(const PotentialSpec& spec, double r_lo, double r_hi);

std::string describe(const PotentialSpec& spec);

}  // namespace teps
