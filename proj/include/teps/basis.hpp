#pragma once

#include "teps/units.hpp"

#include <Eigen/Dense>

#include <memory>
#include <variant>

namespace teps {

// Nodes r_m = (m+1) a, m = 0..points-1; u vanishes at r = 0 and r = (points+1) a.
struct LatticeBasis {
  double a = 0.02;
  int points = 6000;

  void validate() const;
  double r_max() const { return a * points; }
  double wall() const { return a * (points + 1); }
  double node(Eigen::Index m) const { return a * static_cast<double>(m + 1); }
  Eigen::VectorXd nodes() const;
};

struct BesselParams {
  double k0 = 0.315;
  double dk = 0.0084;
  int nk = 8;
  double r_max = 750.0;
  int L = 0;
  double reg_gamma = 0.5;    // width of the origin regularizer on second-kind functions
  double quad_step = 0.01;   // target Simpson step on [0, r_max]

  void validate() const;
  double momentum(int i) const { return k0 + dk * i; }
};

// Quadrature grid and sampled basis functions; column 2i is r j_L(k_i r), column 2i+1 is the
// regularized r y_L(k_i r). kinetic holds (T + centrifugal) applied to each column.
struct BesselSamples {
  Eigen::VectorXd r;
  Eigen::VectorXd weights;
  Eigen::MatrixXd f;
  Eigen::MatrixXd kinetic;
};

struct BesselBasis {
  BesselParams params;
  std::shared_ptr<const BesselSamples> samples;
  std::shared_ptr<const Eigen::MatrixXd> overlap;  // S
  std::shared_ptr<const Eigen::LDLT<Eigen::MatrixXd>> overlap_factor;

  Eigen::Index size() const { return 2 * params.nk; }
  Eigen::VectorXd momenta() const;
  // Coefficients c with sum_j c_j phi_j closest (in L2) to the target sampled on samples->r.
  Eigen::VectorXd project(const Eigen::VectorXd& target) const;
  // Basis expansion evaluated on the quadrature grid.
  Eigen::VectorXcd evaluate(const Eigen::VectorXcd& coeffs) const;
};

BesselBasis make_bessel_basis(const BesselParams& params);

using Basis = std::variant<LatticeBasis, BesselBasis>;

struct HamiltonianMatrix {
  enum class Kind { Lattice, Bessel };
  Kind kind = Kind::Lattice;
  int L = 0;
  Eigen::VectorXd diag;   // lattice: tridiagonal storage
  Eigen::VectorXd off;
  Eigen::MatrixXd dense;  // Bessel
  std::shared_ptr<const Eigen::MatrixXd> overlap;

  Eigen::Index size() const { return kind == Kind::Lattice ? diag.size() : dense.rows(); }
  Eigen::MatrixXd to_dense() const;
  double norm_estimate() const;  // cheap upper bound on the spectral radius

  template <typename Derived>
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> apply(const Eigen::MatrixBase<Derived>& x) const {
    using V = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1>;
    if (kind == Kind::Bessel) return V(dense * x);
    const Eigen::Index n = diag.size();
    V y = diag.cwiseProduct(x.derived()).template cast<typename Derived::Scalar>();
    if (n > 1) {
      y.head(n - 1) += off.cwiseProduct(x.tail(n - 1));
      y.tail(n - 1) += off.cwiseProduct(x.head(n - 1));
    }
    return y;
  }
};

struct SpectralDecomposition {
  Eigen::VectorXd energies;  // ascending
  Eigen::MatrixXd vectors;   // S-orthonormal columns
  std::shared_ptr<const Eigen::MatrixXd> overlap;  // null: identity metric

  // Components of x in the eigenbasis: Psi^T S x.
  Eigen::VectorXcd to_eigen(const Eigen::VectorXcd& x) const;
  Eigen::VectorXcd from_eigen(const Eigen::VectorXcd& c) const { return vectors * c; }
};

HamiltonianMatrix build_lattice_hamiltonian(const LatticeBasis& basis, const PotentialSpec& pot,
                                            const UnitSystem& units, int L);
HamiltonianMatrix build_bessel_hamiltonian(const BesselBasis& basis, const PotentialSpec& pot,
                                           const UnitSystem& units);

inline constexpr double kOverlapFloor = 1e-10;

SpectralDecomposition decompose(const HamiltonianMatrix& H, double overlap_floor = kOverlapFloor);

double nearest_kinetic_momentum(const Basis& basis, const UnitSystem& units, double k_request);

}  // namespace teps
