#include "teps/waves.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace teps {

void validate(const FilterSpec& f) {
  if (std::holds_alternative<FermiFilter>(f)) {
    if (!(std::get<FermiFilter>(f).gamma > 0.0)) throw std::invalid_argument("Fermi filter: gamma must be positive");
    return;
  }
  const auto& e = std::get<ErfFilter>(f);
  if (!(e.gamma > 0.0)) throw std::invalid_argument("erf filter: gamma must be positive");
  if (!(e.r1 < e.r2)) throw std::invalid_argument("erf filter: r1 must be < r2");
}

double filter_value(const FilterSpec& f, double r) {
  if (std::holds_alternative<FermiFilter>(f)) {
    const auto& F = std::get<FermiFilter>(f);
    return 1.0 / (1.0 + std::exp(-(r - F.r0) / F.gamma));
  }
  const auto& e = std::get<ErfFilter>(f);
  return 0.5 * e.amplitude * (std::erf((r - e.r1) / e.gamma) + std::erf((e.r2 - r) / e.gamma));
}

double WaveState::computed_norm() const {
  if (metric) return std::sqrt(std::abs(amplitudes.dot(metric->cast<std::complex<double>>() * amplitudes)));
  return amplitudes.norm();
}

std::complex<double> inner(const WaveState& a, const WaveState& b) {
  if (a.amplitudes.size() != b.amplitudes.size()) throw std::invalid_argument("inner: states live in different bases");
  if (a.metric) return a.amplitudes.dot(a.metric->cast<std::complex<double>>() * b.amplitudes);
  return a.amplitudes.dot(b.amplitudes);
}

DetectorSpec make_detector_spec(double k_in, int L, int n_i, int n_f, double delta_V) {
  if (!(k_in > 0.0)) throw std::invalid_argument("detector: k_in must be positive");
  if (!(n_i < n_f)) throw std::invalid_argument("detector: need n_i < n_f");
  DetectorSpec d;
  d.k_in = k_in;
  d.L = L;
  d.delta_V = delta_V;
  d.n_d = n_f - n_i;
  d.r1 = (2.0 * std::numbers::pi * n_i + delta_V) / k_in;
  d.r2 = (2.0 * std::numbers::pi * n_f + delta_V) / k_in;
  return d;
}

std::pair<int, int> window_integers(double k_in, double r1_target, double width_target) {
  const double lambda = 2.0 * std::numbers::pi / k_in;
  const int n_i = static_cast<int>(std::lround(r1_target / lambda));
  const int n_d = std::max(1, static_cast<int>(std::lround(width_target / lambda)));
  return {n_i, n_i + n_d};
}

double basis_extent(const Basis& basis) {
  if (std::holds_alternative<LatticeBasis>(basis)) return std::get<LatticeBasis>(basis).r_max();
  return std::get<BesselBasis>(basis).params.r_max;
}

std::pair<Eigen::Index, Eigen::Index> lattice_window(const LatticeBasis& lb, double r1, double r2) {
  auto snap = [&](double r) {
    return std::clamp<Eigen::Index>(static_cast<Eigen::Index>(std::llround(r / lb.a)) - 1, 0, lb.points - 1);
  };
  return {snap(r1), snap(r2)};
}

namespace {

double riccati_j(int L, double x) {
  if (L == 0) return std::sin(x);
  return x == 0.0 ? 0.0 : x * std::sph_bessel(static_cast<unsigned>(L), x);
}

double detector_profile(const DetectorSpec& d, double r) {
  return std::sin(d.k_in * r + d.L * std::numbers::pi / 2.0 + d.delta_V);
}

double detector_window(const DetectorSpec& d, double r) {
  if (d.edge_gamma > 0.0)
    return 0.5 * (std::erf((r - d.r1) / d.edge_gamma) + std::erf((d.r2 - r) / d.edge_gamma));
  return (r >= d.r1 && r <= d.r2) ? 1.0 : 0.0;
}

WaveState finish(Eigen::VectorXcd amp, int L, double k, double raw, std::shared_ptr<const Eigen::MatrixXd> metric) {
  WaveState s;
  s.amplitudes = std::move(amp);
  s.L = L;
  s.k_label = k;
  s.raw_norm = raw;
  s.metric = std::move(metric);
  const double n = s.computed_norm();
  if (!(n > 1e-12)) throw std::runtime_error("state has vanishing norm in this basis");
  s.amplitudes /= n;
  s.norm = s.computed_norm();
  return s;
}

}  // namespace

WaveState prepare_initial(const Basis& basis, double k_in, int L, const FilterSpec& f) {
  validate(f);
  if (!(k_in > 0.0)) throw std::invalid_argument("prepare_initial: k_in must be positive");
  if (L < 0) throw std::invalid_argument("prepare_initial: L must be >= 0");
  if (std::holds_alternative<LatticeBasis>(basis)) {
    const auto& lb = std::get<LatticeBasis>(basis);
    lb.validate();
    Eigen::VectorXd t(lb.points);
    for (int m = 0; m < lb.points; ++m) {
      const double r = lb.node(m);
      t(m) = filter_value(f, r) * riccati_j(L, k_in * r);
    }
    const double raw = std::sqrt(lb.a * t.squaredNorm());
    if (raw < 1e-8) throw std::runtime_error("prepare_initial: filter annihilated the state");
    return finish(t.cast<std::complex<double>>(), L, k_in, raw, nullptr);
  }
  const auto& bb = std::get<BesselBasis>(basis);
  if (bb.params.L != L) throw std::invalid_argument("prepare_initial: L differs from the Bessel basis L");
  const auto& s = *bb.samples;
  Eigen::VectorXd t(s.r.size());
  for (Eigen::Index m = 0; m < s.r.size(); ++m) t(m) = filter_value(f, s.r(m)) * riccati_j(L, k_in * s.r(m));
  const double raw = std::sqrt(s.weights.dot(t.cwiseAbs2()));
  if (raw < 1e-8) throw std::runtime_error("prepare_initial: filter annihilated the state");
  return finish(bb.project(t).cast<std::complex<double>>(), L, k_in, raw, bb.overlap);
}

WaveState prepare_detector(const Basis& basis, DetectorSpec& spec, const DetectorGuard& guard) {
  if (!(spec.k_in > 0.0)) throw std::invalid_argument("prepare_detector: k_in must be positive");
  if (!(spec.r1 < spec.r2)) throw std::invalid_argument("prepare_detector: need r1 < r2");
  const double extent = basis_extent(basis);
  if (spec.r1 < guard.inner_limit)
    throw std::invalid_argument("prepare_detector: window overlaps the interaction region");
  if (spec.r2 > (1.0 - guard.wall_margin) * extent)
    throw std::invalid_argument("prepare_detector: window too close to the outer wall");

  if (std::holds_alternative<LatticeBasis>(basis)) {
    const auto& lb = std::get<LatticeBasis>(basis);
    const auto [m1, m2] = lattice_window(lb, spec.r1, spec.r2);
    if (m2 <= m1) throw std::invalid_argument("prepare_detector: window narrower than the grid spacing");
    Eigen::VectorXd t = Eigen::VectorXd::Zero(lb.points);
    for (Eigen::Index m = m1; m <= m2; ++m) t(m) = detector_profile(spec, lb.node(m));
    spec.c_dect = std::sqrt(lb.a * t.squaredNorm());
    return finish(t.cast<std::complex<double>>(), spec.L, spec.k_in, spec.c_dect, nullptr);
  }
  const auto& bb = std::get<BesselBasis>(basis);
  const auto& s = *bb.samples;
  Eigen::VectorXd t(s.r.size());
  for (Eigen::Index m = 0; m < s.r.size(); ++m)
    t(m) = detector_window(spec, s.r(m)) * detector_profile(spec, s.r(m));
  spec.c_dect = std::sqrt(s.weights.dot(t.cwiseAbs2()));
  if (spec.c_dect < 1e-12) throw std::invalid_argument("prepare_detector: empty window");
  return finish(bb.project(t).cast<std::complex<double>>(), spec.L, spec.k_in, spec.c_dect, bb.overlap);
}

NormalizationSet normalizations(const WaveState& initial, const DetectorSpec& detector, const Basis& basis) {
  if (std::abs(initial.k_label - detector.k_in) > 1e-12 * detector.k_in || initial.L != detector.L)
    throw std::invalid_argument("normalizations: initial state and detector disagree on k_in or L");
  DetectorSpec d = detector;
  if (!(d.c_dect > 0.0)) {
    DetectorGuard open{-1e300, -1e300};
    (void)prepare_detector(basis, d, open);
  }
  NormalizationSet n;
  n.c_init = initial.raw_norm;
  n.c_dect = d.c_dect;
  if (!(n.c_init > 0.0)) throw std::invalid_argument("normalizations: initial state carries no raw norm");
  n.c_L = n.c_dect / n.c_init;
  return n;
}

}  // namespace teps
