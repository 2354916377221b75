#include "teps/basis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace teps {

void LatticeBasis::validate() const {
  if (!(a > 0.0)) throw std::invalid_argument("lattice spacing must be positive");
  if (points < 2) throw std::invalid_argument("lattice needs at least 2 points");
}

Eigen::VectorXd LatticeBasis::nodes() const {
  return Eigen::VectorXd::LinSpaced(points, a, a * points);
}

void BesselParams::validate() const {
  if (!(k0 > 0.0) || !(dk > 0.0)) throw std::invalid_argument("Bessel basis: k0 and dk must be positive");
  if (nk < 1) throw std::invalid_argument("Bessel basis: nk must be >= 1");
  if (!(r_max > 0.0)) throw std::invalid_argument("Bessel basis: r_max must be positive");
  if (L < 0) throw std::invalid_argument("Bessel basis: L must be >= 0");
  if (!(reg_gamma > 0.0)) throw std::invalid_argument("Bessel basis: reg_gamma must be positive");
  if (!(quad_step > 0.0) || quad_step > r_max / 8) throw std::invalid_argument("Bessel basis: bad quad_step");
}

Eigen::VectorXd BesselBasis::momenta() const {
  Eigen::VectorXd k(params.nk);
  for (int i = 0; i < params.nk; ++i) k(i) = params.momentum(i);
  return k;
}

Eigen::VectorXd BesselBasis::project(const Eigen::VectorXd& target) const {
  if (target.size() != samples->r.size()) throw std::invalid_argument("project: target not on quadrature grid");
  const Eigen::VectorXd b = samples->f.transpose() * samples->weights.cwiseProduct(target);
  return overlap_factor->solve(b);
}

Eigen::VectorXcd BesselBasis::evaluate(const Eigen::VectorXcd& coeffs) const {
  return samples->f.cast<std::complex<double>>() * coeffs;
}

namespace {

// Riccati-type functions x j_L(x), x y_L(x) divided by k, and their r-derivatives.
struct RadialPair {
  double u, du, w, dw;
};

RadialPair radial_pair(int L, double k, double r) {
  const double x = k * r;
  if (L == 0) return {std::sin(x) / k, std::cos(x), -std::cos(x) / k, std::sin(x)};
  const auto l = static_cast<unsigned>(L);
  const double j = std::sph_bessel(l, x), jm = std::sph_bessel(l - 1, x);
  const double y = std::sph_neumann(l, x), ym = std::sph_neumann(l - 1, x);
  const double jp = jm - (L + 1) / x * j;
  const double yp = ym - (L + 1) / x * y;
  return {r * j, j + x * jp, r * y, y + x * yp};
}

}  // namespace

BesselBasis make_bessel_basis(const BesselParams& params) {
  params.validate();
  auto s = std::make_shared<BesselSamples>();
  auto intervals = static_cast<Eigen::Index>(std::ceil(params.r_max / params.quad_step));
  if (intervals % 2) ++intervals;
  const Eigen::Index n = intervals + 1;
  const double h = params.r_max / static_cast<double>(intervals);
  s->r = Eigen::VectorXd::LinSpaced(n, 0.0, params.r_max);
  s->weights = Eigen::VectorXd::Constant(n, 2.0 * h / 3.0);
  for (Eigen::Index i = 1; i < n; i += 2) s->weights(i) = 4.0 * h / 3.0;
  s->weights(0) = s->weights(n - 1) = h / 3.0;

  const Eigen::Index nb = 2 * params.nk;
  s->f.resize(n, nb);
  s->kinetic.resize(n, nb);
  const int L = params.L;
  const double p = 2.0 * L + 1.0;  // regularizer erf(r/G)^p makes v ~ r^(L+1) at the origin
  const double G = params.reg_gamma;
  for (int i = 0; i < params.nk; ++i) {
    const double k = params.momentum(i);
    for (Eigen::Index m = 0; m < n; ++m) {
      const double r = s->r(m);
      if (r == 0.0) {
        s->f(m, 2 * i) = s->f(m, 2 * i + 1) = 0.0;
        s->kinetic(m, 2 * i) = s->kinetic(m, 2 * i + 1) = 0.0;
        continue;
      }
      const RadialPair fp = radial_pair(L, k, r);
      const double e = std::erf(r / G);
      const double de = 2.0 / (std::sqrt(std::numbers::pi) * G) * std::exp(-(r * r) / (G * G));
      const double dde = -2.0 * r / (G * G) * de;
      const double g = std::pow(e, p);
      const double dg = p * std::pow(e, p - 1.0) * de;
      const double ddg = (L > 0 ? p * (p - 1.0) * std::pow(e, p - 2.0) * de * de : 0.0) +
                         p * std::pow(e, p - 1.0) * dde;
      s->f(m, 2 * i) = fp.u;
      s->f(m, 2 * i + 1) = g * fp.w;
      // (-d2/dr2 + L(L+1)/r^2) acting on u and on g w, in units of the kinetic coefficient.
      s->kinetic(m, 2 * i) = k * k * fp.u;
      s->kinetic(m, 2 * i + 1) = k * k * g * fp.w - (ddg * fp.w + 2.0 * dg * fp.dw);
    }
  }

  Eigen::MatrixXd S = s->f.transpose() * s->weights.asDiagonal() * s->f;
  S = 0.5 * (S + S.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Eigen::EigenvaluesOnly);
  const double smax = es.eigenvalues().maxCoeff();
  if (!(es.eigenvalues().minCoeff() > kOverlapFloor * smax))
    throw std::runtime_error("Bessel basis: overlap matrix is numerically singular (linearly dependent basis)");

  BesselBasis b;
  b.params = params;
  b.samples = s;
  b.overlap = std::make_shared<const Eigen::MatrixXd>(S);
  b.overlap_factor = std::make_shared<const Eigen::LDLT<Eigen::MatrixXd>>(S);
  return b;
}

Eigen::MatrixXd HamiltonianMatrix::to_dense() const {
  if (kind == Kind::Bessel) return dense;
  const Eigen::Index n = diag.size();
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  M.diagonal() = diag;
  if (n > 1) {
    M.diagonal(1) = off;
    M.diagonal(-1) = off;
  }
  return M;
}

double HamiltonianMatrix::norm_estimate() const {
  if (kind == Kind::Bessel) return dense.cwiseAbs().rowwise().sum().maxCoeff();
  const Eigen::Index n = diag.size();
  double m = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    double row = std::abs(diag(i));
    if (i > 0) row += std::abs(off(i - 1));
    if (i + 1 < n) row += std::abs(off(i));
    m = std::max(m, row);
  }
  return m;
}

Eigen::VectorXcd SpectralDecomposition::to_eigen(const Eigen::VectorXcd& x) const {
  if (overlap) return vectors.transpose().cast<std::complex<double>>() * (overlap->cast<std::complex<double>>() * x);
  return vectors.transpose().cast<std::complex<double>>() * x;
}

HamiltonianMatrix build_lattice_hamiltonian(const LatticeBasis& basis, const PotentialSpec& pot,
                                            const UnitSystem& units, int L) {
  basis.validate();
  units.validate();
  validate(pot);
  if (L < 0) throw std::invalid_argument("L must be >= 0");
  if (L > 0 && basis.node(0) <= 0.0) throw std::invalid_argument("centrifugal term singular at r = 0");
  const double c = units.kinetic_coeff;
  const double a2 = basis.a * basis.a;
  HamiltonianMatrix H;
  H.kind = HamiltonianMatrix::Kind::Lattice;
  H.L = L;
  H.diag.resize(basis.points);
  for (int m = 0; m < basis.points; ++m) {
    const double r = basis.node(m);
    H.diag(m) = 2.0 * c / a2 + evaluate_potential(pot, r) + c * L * (L + 1.0) / (r * r);
  }
  H.off = Eigen::VectorXd::Constant(basis.points - 1, -c / a2);
  return H;
}

HamiltonianMatrix build_bessel_hamiltonian(const BesselBasis& basis, const PotentialSpec& pot,
                                           const UnitSystem& units) {
  units.validate();
  validate(pot);
  const auto& s = *basis.samples;
  Eigen::VectorXd wv(s.r.size());
  for (Eigen::Index m = 0; m < s.r.size(); ++m) wv(m) = s.weights(m) * evaluate_potential(pot, s.r(m));
  Eigen::MatrixXd T = units.kinetic_coeff * (s.f.transpose() * s.weights.asDiagonal() * s.kinetic);
  Eigen::MatrixXd V = s.f.transpose() * wv.asDiagonal() * s.f;
  HamiltonianMatrix H;
  H.kind = HamiltonianMatrix::Kind::Bessel;
  H.L = basis.params.L;
  H.dense = 0.5 * (T + T.transpose()) + 0.5 * (V + V.transpose());
  H.overlap = basis.overlap;
  return H;
}

SpectralDecomposition decompose(const HamiltonianMatrix& H, double overlap_floor) {
  SpectralDecomposition d;
  if (H.kind == HamiltonianMatrix::Kind::Lattice) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(H.diag, H.off, Eigen::ComputeEigenvectors);
    if (es.info() != Eigen::Success) throw std::runtime_error("tridiagonal eigensolver failed");
    d.energies = es.eigenvalues();
    d.vectors = es.eigenvectors();
    return d;
  }
  if (!H.overlap) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H.dense);
    d.energies = es.eigenvalues();
    d.vectors = es.eigenvectors();
    return d;
  }
  // Symmetric orthogonalization X = S^{-1/2}.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ss(*H.overlap);
  const Eigen::VectorXd s = ss.eigenvalues();
  if (!(s.minCoeff() > overlap_floor * s.maxCoeff()))
    throw std::runtime_error("decompose: overlap matrix below conditioning floor");
  const Eigen::MatrixXd X = ss.eigenvectors() * s.cwiseInverse().cwiseSqrt().asDiagonal() * ss.eigenvectors().transpose();
  Eigen::MatrixXd Hp = X * H.dense * X;
  Hp = 0.5 * (Hp + Hp.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Hp);
  d.energies = es.eigenvalues();
  d.vectors = X * es.eigenvectors();
  d.overlap = H.overlap;
  return d;
}

double nearest_kinetic_momentum(const Basis& basis, const UnitSystem& units, double k_request) {
  units.validate();
  if (!(k_request > 0.0)) throw std::invalid_argument("k_request must be positive");
  if (std::holds_alternative<LatticeBasis>(basis)) {
    // V = 0 eigenvectors are sin(n pi r / W) with W the wall position; the eigen-momentum is
    // their wavenumber.
    const auto& lb = std::get<LatticeBasis>(basis);
    lb.validate();
    const double W = lb.wall();
    const long n = std::clamp<long>(std::lround(k_request * W / std::numbers::pi), 1L, lb.points);
    return std::numbers::pi * static_cast<double>(n) / W;
  }
  // Bessel: eigen-momenta of the free Hamiltonian in the basis.
  const auto& bb = std::get<BesselBasis>(basis);
  const SpectralDecomposition d = decompose(build_bessel_hamiltonian(bb, Gaussian{0.0, 1.0}, units));
  double best = 0.0, dist = 1e300;
  for (Eigen::Index j = 0; j < d.energies.size(); ++j) {
    if (d.energies(j) <= 0.0) continue;
    const double k = std::sqrt(d.energies(j) / units.kinetic_coeff);
    if (std::abs(k - k_request) < dist) {
      dist = std::abs(k - k_request);
      best = k;
    }
  }
  return best;
}

}  // namespace teps
