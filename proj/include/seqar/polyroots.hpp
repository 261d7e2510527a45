#ifndef SEQAR_POLYROOTS_HPP
#define SEQAR_POLYROOTS_HPP

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "seqar/types.hpp"

namespace seqar {

/// Default tolerance on | |z| - 1 | for unit-circle membership and on the
/// pairwise distance used to merge roots into one multiple root.
inline constexpr double kDefaultUnitTol = 1e-9;

/// Companion matrix of the vector form X_n = A X_{n-1} + xi_n: first row is
/// theta, the subdiagonal is ones.
template <typename Derived>
Matrix<typename Derived::Scalar> companion_matrix(
    const Eigen::MatrixBase<Derived>& theta) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index p = theta.size();
  Matrix<Scalar> a = Matrix<Scalar>::Zero(p, p);
  a.row(0) = theta.transpose();
  if (p > 1) a.diagonal(-1).setOnes();
  return a;
}

inline Eigen::MatrixXd companion_matrix(const ParamVector& theta) {
  return companion_matrix(theta.coeffs());
}

/// Coefficients of z^p - theta_1 z^{p-1} - ... - theta_p, highest power first.
template <typename Derived>
Vector<typename Derived::Scalar> characteristic_polynomial(
    const Eigen::MatrixBase<Derived>& theta) {
  using Scalar = typename Derived::Scalar;
  Vector<Scalar> c(theta.size() + 1);
  c[0] = Scalar(1);
  c.tail(theta.size()) = -theta;
  return c;
}

/// Product of two polynomials stored highest power first.
template <typename DerivedA, typename DerivedB>
Vector<typename DerivedA::Scalar> poly_multiply(
    const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  Vector<Scalar> out = Vector<Scalar>::Zero(a.size() + b.size() - 1);
  for (Eigen::Index i = 0; i < a.size(); ++i)
    for (Eigen::Index j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

struct Root {
  std::complex<double> value;
  int multiplicity = 1;
  bool on_unit_circle = false;
};

/// Distinct roots of the characteristic polynomial. Non-real roots come in
/// conjugate pairs with equal multiplicity; multiplicities sum to p.
struct RootSet {
  std::vector<Root> roots;
  double tol = kDefaultUnitTol;
  /// Largest multiplicity among unit-circle roots, 0 when there are none.
  int rho = 0;

  int degree() const;
  double max_modulus() const;
  /// Every root expanded by multiplicity.
  std::vector<std::complex<double>> flattened() const;
};

/// Roots by Aberth-Ehrlich iteration in extended precision. Roots closer than
/// `tol` are merged into one multiple root.
RootSet char_roots(const ParamVector& theta, double tol = kDefaultUnitTol);

struct RegionClass {
  enum class Kind { Stable, Boundary, BoundaryOther, Explosive };

  Kind kind = Kind::Stable;
  /// 1..7 when kind == Boundary, else 0.
  int gamma = 0;
  /// Angle in (0, pi) of the complex unit pair, if any.
  std::optional<double> phi;

  bool is_gamma(int i) const { return kind == Kind::Boundary && gamma == i; }
  /// "Stable", "Gamma1" ... "Gamma7", "BoundaryOther" or "Explosive".
  std::string name() const;

  static RegionClass stable() { return {Kind::Stable, 0, std::nullopt}; }
  static RegionClass explosive() { return {Kind::Explosive, 0, std::nullopt}; }
  static RegionClass other() { return {Kind::BoundaryOther, 0, std::nullopt}; }
  static RegionClass boundary(int i, std::optional<double> phi = std::nullopt) {
    return {Kind::Boundary, i, phi};
  }
};

/// Stable, one of the seven boundary strata, another closed-region boundary
/// point, or explosive.
RegionClass classify_region(const RootSet& roots);

inline RegionClass classify_region(const ParamVector& theta,
                                   double tol = kDefaultUnitTol) {
  return classify_region(char_roots(theta, tol));
}

/// P(z) = (z+1)^d1 (z-1)^d2 (z^2 - 2 z cos(phi) + 1)^d3 * phi(z), with
/// phi(z) = z^r + beta_1 z^{r-1} + ... + beta_r strictly stable.
struct UnitFactorization {
  int delta1 = 0;
  int delta2 = 0;
  int delta3 = 0;
  std::optional<double> phi;
  Eigen::VectorXd stable_coeffs;  // beta_1..beta_r

  int r() const { return static_cast<int>(stable_coeffs.size()); }
  /// Monic stable factor, highest power first.
  Eigen::VectorXd stable_polynomial() const;
  /// Product of all factors, highest power first.
  Eigen::VectorXd expand() const;
};

/// Throws UnsupportedBoundary outside the region where every unit root is
/// simple and there is at most one complex unit pair, InvalidArgument for
/// explosive parameters.
UnitFactorization factor_unit_roots(const ParamVector& theta,
                                    double tol = kDefaultUnitTol);

/// theta whose characteristic polynomial has exactly these roots. The list
/// must be closed under conjugation.
ParamVector theta_from_roots(std::span<const std::complex<double>> roots);

/// theta read back from a monic characteristic polynomial.
ParamVector theta_from_polynomial(const Eigen::VectorXd& monic);

}  // namespace seqar

#endif  // SEQAR_POLYROOTS_HPP
