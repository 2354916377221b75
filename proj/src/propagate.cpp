#include "teps/propagate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace teps {

using cd = std::complex<double>;

namespace {

void check_times(const std::vector<double>& times) {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= 0.0)) throw std::invalid_argument("evolve: times must be >= 0");
    if (i > 0 && times[i] < times[i - 1]) throw std::invalid_argument("evolve_series: times must be ascending");
  }
}

WaveState with_amplitudes(const WaveState& proto, Eigen::VectorXcd amp) {
  WaveState s = proto;
  s.amplitudes = std::move(amp);
  s.norm = s.computed_norm();
  return s;
}

void tridiag_apply(const Eigen::VectorXd& d, const Eigen::VectorXd& e, const Eigen::VectorXcd& x, Eigen::VectorXcd& y) {
  const Eigen::Index n = d.size();
  y.resize(n);
  if (n == 1) {
    y(0) = d(0) * x(0);
    return;
  }
  y(0) = d(0) * x(0) + e(0) * x(1);
  for (Eigen::Index i = 1; i + 1 < n; ++i) y(i) = e(i - 1) * x(i - 1) + d(i) * x(i) + e(i) * x(i + 1);
  y(n - 1) = e(n - 2) * x(n - 2) + d(n - 1) * x(n - 1);
}

}  // namespace

bool uses_spectral(const HamiltonianMatrix& H, const PropagatorSpec& spec) {
  if (H.kind == HamiltonianMatrix::Kind::Bessel) return true;
  switch (spec.method) {
    case PropagatorSpec::Method::Spectral: return true;
    case PropagatorSpec::Method::Krylov: return false;
    default: return H.size() <= spec.spectral_max_points;
  }
}

WaveState evolve(const WaveState& state, const SpectralDecomposition& d, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("evolve: t must be >= 0");
  if (state.amplitudes.size() != d.vectors.rows()) throw std::invalid_argument("evolve: basis mismatch");
  Eigen::VectorXcd c = d.to_eigen(state.amplitudes);
  for (Eigen::Index j = 0; j < c.size(); ++j) c(j) *= std::exp(cd(0.0, -d.energies(j) * t));
  return with_amplitudes(state, d.from_eigen(c));
}

std::vector<WaveState> evolve_series(const WaveState& state, const SpectralDecomposition& d,
                                     const std::vector<double>& times) {
  check_times(times);
  if (state.amplitudes.size() != d.vectors.rows()) throw std::invalid_argument("evolve: basis mismatch");
  const Eigen::VectorXcd c0 = d.to_eigen(state.amplitudes);
  std::vector<WaveState> out(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    Eigen::VectorXcd c = c0;
    for (Eigen::Index j = 0; j < c.size(); ++j) c(j) *= std::exp(cd(0.0, -d.energies(j) * times[i]));
    out[i] = with_amplitudes(state, d.from_eigen(c));
  }
  return out;
}

Eigen::VectorXcd krylov_propagate(const HamiltonianMatrix& H, const Eigen::VectorXcd& v, double t,
                                  const KrylovSpec& spec) {
  if (H.kind != HamiltonianMatrix::Kind::Lattice) throw std::invalid_argument("Krylov propagation needs a lattice matrix");
  if (spec.dim < 2 || !(spec.tol > 0.0)) throw std::invalid_argument("Krylov: bad subspace dimension or tolerance");
  if (!(t >= 0.0)) throw std::invalid_argument("evolve: t must be >= 0");
  const Eigen::Index n = v.size();
  const int m = static_cast<int>(std::min<Eigen::Index>(spec.dim, n));
  Eigen::VectorXcd psi = v;
  Eigen::MatrixXcd Q(n, m + 1);
  Eigen::VectorXcd w(n);
  std::vector<double> alpha(m), beta(m);
  double done = 0.0;
  double dt_last = spec.dt > 0.0 ? spec.dt : t;
  long steps = 0;

  while (done < t) {
    if (++steps > spec.max_steps) throw std::runtime_error("Krylov: step budget exhausted");
    const double beta0 = psi.norm();
    if (beta0 == 0.0) return psi;
    Q.col(0) = psi / beta0;
    int me = m;
    bool happy = false;
    for (int j = 0; j < m; ++j) {
      tridiag_apply(H.diag, H.off, Q.col(j), w);
      alpha[j] = Q.col(j).dot(w).real();
      w -= alpha[j] * Q.col(j);
      if (j > 0) w -= beta[j - 1] * Q.col(j - 1);
      beta[j] = w.norm();
      if (beta[j] < 1e-13 * std::max(1.0, std::abs(alpha[j]))) {
        me = j + 1;
        happy = true;
        break;
      }
      Q.col(j + 1) = w / beta[j];
    }
    Eigen::VectorXd td(me), te(std::max(me - 1, 0));
    for (int j = 0; j < me; ++j) td(j) = alpha[j];
    for (int j = 0; j + 1 < me; ++j) te(j) = beta[j];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    if (me > 1) {
      es.computeFromTridiagonal(td, te, Eigen::ComputeEigenvectors);
    } else {
      Eigen::MatrixXd one(1, 1);
      one(0, 0) = td(0);
      es.compute(one);
    }
    const Eigen::VectorXd theta = es.eigenvalues();
    const Eigen::MatrixXd Z = es.eigenvectors();
    const Eigen::VectorXd z0 = Z.row(0).transpose();
    auto small_exp = [&](double dt) {
      Eigen::VectorXcd y(me);
      for (int j = 0; j < me; ++j) y(j) = std::exp(cd(0.0, -theta(j) * dt)) * z0(j);
      return Eigen::VectorXcd(Z.cast<cd>() * y);
    };

    const double remaining = t - done;
    double dt = happy ? remaining : std::min(remaining, 4.0 * dt_last);
    Eigen::VectorXcd y = small_exp(dt);
    if (!happy) {
      for (int tries = 0;; ++tries) {
        const double err = beta[me - 1] * std::abs(y(me - 1));
        if (err <= spec.tol) break;
        if (tries > 200 || dt < 1e-14 * std::max(1.0, t)) throw std::runtime_error("Krylov: step size underflow");
        dt *= std::clamp(0.9 * std::pow(spec.tol / err, 1.0 / me), 0.05, 0.9);
        y = small_exp(dt);
      }
    }
    psi = beta0 * (Q.leftCols(me) * y);
    done += dt;
    if (dt < remaining) dt_last = dt;
  }
  return psi;
}

WaveState evolve(const WaveState& state, const HamiltonianMatrix& H, double t, const PropagatorSpec& spec) {
  if (state.amplitudes.size() != H.size()) throw std::invalid_argument("evolve: basis mismatch");
  if (uses_spectral(H, spec)) return evolve(state, decompose(H), t);
  return with_amplitudes(state, krylov_propagate(H, state.amplitudes, t, spec.krylov));
}

std::vector<WaveState> evolve_series(const WaveState& state, const HamiltonianMatrix& H,
                                     const std::vector<double>& times, const PropagatorSpec& spec) {
  check_times(times);
  if (state.amplitudes.size() != H.size()) throw std::invalid_argument("evolve: basis mismatch");
  if (uses_spectral(H, spec)) return evolve_series(state, decompose(H), times);
  std::vector<WaveState> out;
  out.reserve(times.size());
  Eigen::VectorXcd psi = state.amplitudes;
  double now = 0.0;
  for (double t : times) {
    psi = krylov_propagate(H, psi, t - now, spec.krylov);
    now = t;
    out.push_back(with_amplitudes(state, psi));
  }
  return out;
}

double energy_expectation(const WaveState& state, const HamiltonianMatrix& H) {
  const Eigen::VectorXcd Hx = H.apply(state.amplitudes);
  const double num = state.amplitudes.dot(Hx).real();
  if (H.overlap) return num / state.amplitudes.dot(H.overlap->cast<cd>() * state.amplitudes).real();
  return num / state.amplitudes.squaredNorm();
}

}  // namespace teps
