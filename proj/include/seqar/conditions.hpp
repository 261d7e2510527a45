#ifndef SEQAR_CONDITIONS_HPP
#define SEQAR_CONDITIONS_HPP

#include <optional>

#include <Eigen/Core>
#include <Eigen/LU>

#include "seqar/polyroots.hpp"
#include "seqar/types.hpp"

namespace seqar {

inline constexpr double kDefaultPdTol = 1e-8;
/// Condition number above which the kappa system counts as singular.
inline constexpr double kKappaCondLimit = 1e12;

/// Symmetric Toeplitz matrix with unit diagonal and first row (1, kappa).
template <typename Derived>
Matrix<typename Derived::Scalar> unit_toeplitz(
    const Eigen::MatrixBase<Derived>& kappa) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index p = kappa.size() + 1;
  Matrix<Scalar> out(p, p);
  for (Eigen::Index i = 0; i < p; ++i)
    for (Eigen::Index j = 0; j < p; ++j) {
      const Eigen::Index lag = i > j ? i - j : j - i;
      out(i, j) = lag == 0 ? Scalar(1) : kappa[lag - 1];
    }
  return out;
}

/// Solves F = A F A' + C for F by vectorising into a p^2 linear system.
template <typename DerivedA, typename DerivedC>
Matrix<typename DerivedA::Scalar> solve_stein(
    const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedC>& c) {
  using Scalar = typename DerivedA::Scalar;
  const Eigen::Index p = a.rows();
  const Eigen::Index n = p * p;
  // vec(A F A') = (A kron A) vec(F), column-major vec.
  Matrix<Scalar> system = Matrix<Scalar>::Identity(n, n);
  for (Eigen::Index i = 0; i < p; ++i)
    for (Eigen::Index j = 0; j < p; ++j)
      for (Eigen::Index k = 0; k < p; ++k)
        for (Eigen::Index l = 0; l < p; ++l)
          system(i + j * p, k + l * p) -= a(i, k) * a(j, l);
  Matrix<Scalar> rhs = c;
  const Vector<Scalar> vec_f =
      system.fullPivLu().solve(Eigen::Map<const Vector<Scalar>>(rhs.data(), n));
  Matrix<Scalar> f = Eigen::Map<const Matrix<Scalar>>(vec_f.data(), p, p);
  return (f + f.transpose()) / Scalar(2);
}

/// Coefficient matrix and right-hand side of the linear system whose
/// solution (kappa_1..kappa_{p-1}) fills the off-diagonals of L(theta).
/// Row j: Y_j - sum_{k<j} theta_{j-k} Y_k - sum_{k<=p-j} theta_{k+j} Y_k
/// = theta_j.
struct KappaSystem {
  Eigen::MatrixXd matrix;
  Eigen::VectorXd rhs;
};
KappaSystem kappa_system(const ParamVector& theta);

/// The unique solution, or nullopt when the system is singular (condition
/// number above kKappaCondLimit). Empty for p = 1.
std::optional<Eigen::VectorXd> solve_kappa(const ParamVector& theta);

/// L(theta), or nullopt when the kappa system is singular.
std::optional<Eigen::MatrixXd> build_L(const ParamVector& theta);

struct ConditionReport {
  bool cond1 = false;  // all roots in the closed unit disk
  bool cond2 = false;  // unit-modulus roots are simple
  bool cond3 = false;  // kappa system solvable and L positive definite
  std::optional<Eigen::VectorXd> kappa;
  std::optional<Eigen::MatrixXd> L;
  std::optional<double> min_eig_L;
  std::optional<double> kappa_condition;
  RegionClass region;
  RootSet roots;

  bool all() const { return cond1 && cond2 && cond3; }
};

/// Never throws for a valid theta; what could not be computed stays empty.
ConditionReport check_conditions(const ParamVector& theta,
                                 double tol = kDefaultUnitTol,
                                 double pd_tol = kDefaultPdTol);

struct StationaryLimit {
  Eigen::MatrixXd F;
  double trace_F = 0;
  Eigen::MatrixXd Lambda;  // p F / tr F
};

/// lim M_n / n for a stable theta; throws NotStable otherwise.
StationaryLimit stationary_limit(const ParamVector& theta, double sigma2,
                                 double tol = kDefaultUnitTol);

}  // namespace seqar

#endif  // SEQAR_CONDITIONS_HPP
