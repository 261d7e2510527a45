#include "seqar/limits.hpp"

#include <cmath>
#include <string>

#include <Eigen/LU>

#include "seqar/conditions.hpp"
#include "seqar/errors.hpp"

namespace seqar {

namespace {

struct Expected {
  int d1, d2, d3;
};

Expected expected_multiplicities(int gamma) {
  switch (gamma) {
    case 1: return {1, 0, 0};
    case 2: return {0, 1, 0};
    case 3: return {0, 0, 1};
    case 4: return {1, 1, 0};
    case 5: return {1, 0, 1};
    case 6: return {0, 1, 1};
    case 7: return {1, 1, 1};
    default: throw InvalidArgument("gamma index must be 1..7");
  }
}

Eigen::VectorXd poly(std::initializer_list<double> c) {
  return Eigen::Map<const Eigen::VectorXd>(c.begin(),
                                           static_cast<Eigen::Index>(c.size()));
}

Eigen::VectorXd product(const std::vector<Eigen::VectorXd>& factors,
                        std::size_t skip) {
  Eigen::VectorXd out = poly({1.0});
  for (std::size_t i = 0; i < factors.size(); ++i)
    if (i != skip) out = poly_multiply(out, factors[i]);
  return out;
}

// sigma2 * 4 sin^2(phi) / (k_aa + k_bb + (k_ab + k_ba) cos(phi)) for the
// 2x2 block of kappa starting at index a.
double pair_b2(const Eigen::MatrixXd& kappa, Eigen::Index a, double phi,
               double sigma2) {
  const double s = std::sin(phi);
  const double denom = kappa(a, a) + kappa(a + 1, a + 1) +
                       (kappa(a, a + 1) + kappa(a + 1, a)) * std::cos(phi);
  return 4.0 * sigma2 * s * s / denom;
}

}  // namespace

Eigen::MatrixXd q_matrix(const ParamVector& theta, const UnitFactorization& fac,
                         const RegionClass& gamma) {
  if (gamma.kind != RegionClass::Kind::Boundary)
    throw InvalidArgument("q_matrix needs a Gamma1..Gamma7 point, got " +
                          gamma.name());
  const Expected e = expected_multiplicities(gamma.gamma);
  if (fac.delta1 != e.d1 || fac.delta2 != e.d2 || fac.delta3 != e.d3)
    throw InvalidArgument("unit-root factorisation does not match " + gamma.name());
  if (fac.delta3 && !fac.phi)
    throw InvalidArgument("complex unit pair without an angle");

  const int p = theta.order();
  std::vector<Eigen::VectorXd> comps;
  if (gamma.gamma == 4) {
    comps.push_back(poly({1.0, 0.0, -1.0}));
  } else {
    if (e.d1) comps.push_back(poly({1.0, 1.0}));
    if (e.d2) comps.push_back(poly({1.0, -1.0}));
  }
  if (e.d3) comps.push_back(poly({1.0, -2.0 * std::cos(*fac.phi), 1.0}));
  if (fac.r() > 0) comps.push_back(fac.stable_polynomial());

  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(p, p);
  Eigen::Index row = 0;
  for (std::size_t c = 0; c < comps.size(); ++c) {
    const Eigen::VectorXd other = product(comps, c);
    const Eigen::Index d = comps[c].size() - 1;
    for (Eigen::Index j = 0; j < d; ++j, ++row) {
      if (j + other.size() > p)
        throw InvalidArgument("factor degrees do not add up to p");
      q.row(row).segment(j, other.size()) = other.transpose();
    }
  }
  if (row != p) throw InvalidArgument("factor degrees do not add up to p");
  return q;
}

LimitSpec limit_constants(const ParamVector& theta, double sigma2, double tol) {
  if (!(sigma2 > 0) || !std::isfinite(sigma2))
    throw InvalidArgument("sigma2 must be positive and finite");
  const RegionClass cls = classify_region(theta, tol);
  switch (cls.kind) {
    case RegionClass::Kind::Stable:
      throw InvalidArgument(
          "theta is stable; tau(h)/h has a deterministic limit, use "
          "tau_limit_stable");
    case RegionClass::Kind::Explosive:
      throw InvalidArgument("theta is explosive; no limit law");
    case RegionClass::Kind::BoundaryOther:
      throw UnsupportedBoundary(
          "theta lies on the boundary outside Gamma1..Gamma7");
    case RegionClass::Kind::Boundary:
      break;
  }

  LimitSpec spec;
  spec.gamma = cls;
  spec.factorization = factor_unit_roots(theta, tol);
  spec.Q = q_matrix(theta, spec.factorization, cls);
  spec.sigma2 = sigma2;
  spec.phi = spec.factorization.phi;
  spec.experimental = cls.gamma == 7;

  Eigen::FullPivLU<Eigen::MatrixXd> lu(spec.Q);
  if (!lu.isInvertible())
    throw RootFinderError("filter matrix Q is singular");
  const Eigen::MatrixXd qinv = lu.inverse();
  const Eigen::MatrixXd g = qinv.transpose() * qinv;  // (Q Q')^{-1}
  spec.kappa = sigma2 * g;
  const Eigen::MatrixXd& k = spec.kappa;

  switch (cls.gamma) {
    case 1:
    case 2:
      spec.b2 = sigma2 / k(0, 0);
      break;
    case 3:
      spec.b2 = pair_b2(k, 0, *spec.phi, sigma2);
      break;
    case 4: {
      const double r1 = sigma2 / 4.0 * (g(0, 0) + g(1, 1) + g(0, 1) + g(1, 0));
      const double r2 = sigma2 / 4.0 * (g(0, 0) + g(1, 1) - g(0, 1) - g(1, 0));
      spec.b2 = sigma2 / r1;
      spec.mu = {r2 / r1};
      break;
    }
    case 5:
    case 6:
      spec.b2 = pair_b2(k, 1, *spec.phi, sigma2);
      spec.mu = {k(0, 0) * spec.b2 / sigma2};
      break;
    case 7:
      spec.b2 = pair_b2(k, 2, *spec.phi, sigma2);
      spec.mu = {k(0, 0) * spec.b2 / sigma2, k(1, 1) * spec.b2 / sigma2};
      break;
  }
  if (!(spec.b2 > 0) || !std::isfinite(spec.b2))
    throw RootFinderError("limit constant b^2 is not positive");
  spec.b = std::sqrt(spec.b2);
  return spec;
}

double tau_limit_stable(const ParamVector& theta, double sigma2, double tol) {
  if (!(sigma2 > 0) || !std::isfinite(sigma2))
    throw InvalidArgument("sigma2 must be positive and finite");
  return sigma2 / stationary_limit(theta, sigma2, tol).trace_F;
}

}  // namespace seqar
