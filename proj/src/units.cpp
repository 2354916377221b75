#include "teps/units.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace teps {

void UnitSystem::validate() const {
  if (!(kinetic_coeff > 0.0) || !std::isfinite(kinetic_coeff))
    throw std::invalid_argument("kinetic_coeff must be positive");
}

namespace {

struct Checker {
  void operator()(const Gaussian& g) const {
    if (!(g.sigma > 0.0)) throw std::invalid_argument("Gaussian sigma must be positive");
  }
  void operator()(const LennardJones& lj) const {
    if (!(lj.sigma > 0.0)) throw std::invalid_argument("Lennard-Jones sigma must be positive");
    if (!(lj.r_core > 0.0)) throw std::invalid_argument("Lennard-Jones r_core must be positive");
  }
  void operator()(const Tabulated& t) const {
    if (t.r.size() != t.V.size() || t.r.size() < 2)
      throw std::invalid_argument("tabulated potential needs >= 2 matching (r, V) nodes");
    if (!std::is_sorted(t.r.begin(), t.r.end()) ||
        std::adjacent_find(t.r.begin(), t.r.end()) != t.r.end())
      throw std::invalid_argument("tabulated potential nodes must be strictly increasing");
  }
};

double lj_value(const LennardJones& lj, double r) {
  const double x = std::pow(lj.sigma / std::max(r, lj.r_core), 6);
  return 4.0 * lj.epsilon * (x * x - x);
}

double tab_value(const Tabulated& t, double r) {
  if (r <= t.r.front()) return t.V.front();
  if (r >= t.r.back()) return 0.0;
  auto it = std::upper_bound(t.r.begin(), t.r.end(), r);
  const auto j = static_cast<std::size_t>(it - t.r.begin());
  const double s = (r - t.r[j - 1]) / (t.r[j] - t.r[j - 1]);
  return (1.0 - s) * t.V[j - 1] + s * t.V[j];
}

}  // namespace

void validate(const PotentialSpec& spec) { std::visit(Checker{}, spec); }

double evaluate_potential(const PotentialSpec& spec, double r) {
  if (std::holds_alternative<Gaussian>(spec)) {
    const auto& g = std::get<Gaussian>(spec);
    return g.V0 * std::exp(-r * r / (g.sigma * g.sigma));
  }
  if (std::holds_alternative<LennardJones>(spec)) return lj_value(std::get<LennardJones>(spec), r);
  return tab_value(std::get<Tabulated>(spec), r);
}

double potential_range(const PotentialSpec& spec, double tol, double r_start) {
  if (std::holds_alternative<Tabulated>(spec)) {
    const auto& t = std::get<Tabulated>(spec);
    double last = 0.0;
    for (std::size_t i = 0; i < t.r.size(); ++i)
      if (std::abs(t.V[i]) > tol) last = (i + 1 < t.r.size()) ? t.r[i + 1] : t.r[i];
    return std::max(last, r_start);
  }
  if (std::holds_alternative<Gaussian>(spec)) {
    const auto& g = std::get<Gaussian>(spec);
    if (std::abs(g.V0) <= tol) return r_start;
    return std::max(r_start, g.sigma * std::sqrt(std::log(std::abs(g.V0) / tol)));
  }
  // LJ tail ~ 4 eps (sigma/r)^6 dominates far out.
  const auto& lj = std::get<LennardJones>(spec);
  double r = std::max(r_start, std::pow(2.0, 1.0 / 6.0) * lj.sigma);
  while (std::abs(lj_value(lj, r)) > tol) r *= 1.05;
  return r;
}

double potential_max_abs(const PotentialSpec& spec, double r_lo, double r_hi) {
  const int n = 4000;
  double m = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double r = r_lo + (r_hi - r_lo) * i / n;
    m = std::max(m, std::abs(evaluate_potential(spec, r)));
  }
  return m;
}

std::string describe(const PotentialSpec& spec) {
  std::ostringstream os;
  os.precision(10);
  if (std::holds_alternative<Gaussian>(spec)) {
    const auto& g = std::get<Gaussian>(spec);
    os << "gaussian(V0=" << g.V0 << ";sigma=" << g.sigma << ")";
  } else if (std::holds_alternative<LennardJones>(spec)) {
    const auto& lj = std::get<LennardJones>(spec);
    os << "lennard_jones(epsilon=" << lj.epsilon << ";sigma=" << lj.sigma << ";r_core=" << lj.r_core << ")";
  } else {
    os << "tabulated(" << std::get<Tabulated>(spec).r.size() << " nodes)";
  }
  return os.str();
}

}  // namespace teps
