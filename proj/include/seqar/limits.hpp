#ifndef SEQAR_LIMITS_HPP
#define SEQAR_LIMITS_HPP

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "seqar/polyroots.hpp"
#include "seqar/types.hpp"

namespace seqar {

/// Limit law of the normalised stopping time on a boundary stratum:
/// tau(h) / (b sqrt h) converges to nu_i, i = gamma.gamma.
struct LimitSpec {
  RegionClass gamma;
  UnitFactorization factorization;
  /// Filter bank mapping X_n to the unit-root and stable components.
  Eigen::MatrixXd Q;
  /// sigma2 (Q Q')^{-1}
  Eigen::MatrixXd kappa;
  double sigma2 = 1.0;
  double b2 = 0;
  double b = 0;
  /// mu_1 for Gamma4, mu_2 for Gamma5/6, (mu_3, mu_4) for Gamma7; empty
  /// otherwise. Order matches the weights of the nu functional.
  std::vector<double> mu;
  std::optional<double> phi;
  /// Gamma7 uses a filter bank built by analogy with Gamma5.
  bool experimental = false;

  int nu_index() const { return gamma.gamma; }
};

/// Rows per component, in the order (-1), (+1), complex pair, stable. Each
/// unit-root component applies the product of all other factors; the stable
/// rows apply the product of every unit-root factor, shifted by one column
/// per row. Gamma4 treats (z+1)(z-1) as one two-row component.
Eigen::MatrixXd q_matrix(const ParamVector& theta, const UnitFactorization& fac,
                         const RegionClass& gamma);

/// b, mu and Q for theta on a Gamma stratum, normalised for the threshold
/// h sigma2 so that b does not depend on sigma2. Throws InvalidArgument for
/// stable or explosive theta and UnsupportedBoundary for other boundary
/// points.
LimitSpec limit_constants(const ParamVector& theta, double sigma2,
                          double tol = kDefaultUnitTol);

/// sigma2 / tr F, the in-probability limit of tau(h) / h for stable theta.
double tau_limit_stable(const ParamVector& theta, double sigma2,
                        double tol = kDefaultUnitTol);

}  // namespace seqar

#endif  // SEQAR_LIMITS_HPP
