#include "seqar/conditions.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace seqar {

KappaSystem kappa_system(const ParamVector& theta) {
  const int p = theta.order();
  const int m = p - 1;
  KappaSystem sys{Eigen::MatrixXd::Identity(m, m), Eigen::VectorXd(m)};
  // theta is 1-based in the formulas; theta[i - 1] below.
  for (int j = 1; j <= m; ++j) {
    for (int k = 1; k < j; ++k) sys.matrix(j - 1, k - 1) -= theta[j - k - 1];
    for (int k = 1; k <= p - j; ++k) sys.matrix(j - 1, k - 1) -= theta[k + j - 1];
    sys.rhs[j - 1] = theta[j - 1];
  }
  return sys;
}

namespace {

struct KappaSolve {
  std::optional<Eigen::VectorXd> kappa;
  std::optional<double> condition;
};

KappaSolve solve_kappa_detailed(const ParamVector& theta) {
  if (theta.order() == 1) return {Eigen::VectorXd(0), 1.0};
  const KappaSystem sys = kappa_system(theta);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(sys.matrix,
                                        Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  const double smax = s.maxCoeff();
  const double smin = s.minCoeff();
  if (!(smin > 0) || smax / smin > kKappaCondLimit)
    return {std::nullopt, smin > 0 ? std::optional<double>(smax / smin)
                                   : std::nullopt};
  return {Eigen::VectorXd(svd.solve(sys.rhs)), smax / smin};
}

}  // namespace

std::optional<Eigen::VectorXd> solve_kappa(const ParamVector& theta) {
  return solve_kappa_detailed(theta).kappa;
}

std::optional<Eigen::MatrixXd> build_L(const ParamVector& theta) {
  const auto kappa = solve_kappa(theta);
  if (!kappa) return std::nullopt;
  return unit_toeplitz(*kappa);
}

ConditionReport check_conditions(const ParamVector& theta, double tol,
                                 double pd_tol) {
  ConditionReport rep;
  rep.roots = char_roots(theta, tol);
  rep.region = classify_region(rep.roots);
  rep.cond1 = rep.region.kind != RegionClass::Kind::Explosive;
  rep.cond2 = rep.roots.rho <= 1;

  const KappaSolve solved = solve_kappa_detailed(theta);
  rep.kappa = solved.kappa;
  rep.kappa_condition = solved.condition;
  if (rep.kappa) {
    rep.L = unit_toeplitz(*rep.kappa);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(*rep.L,
                                                       Eigen::EigenvaluesOnly);
    rep.min_eig_L = eig.eigenvalues().minCoeff();
    rep.cond3 = *rep.min_eig_L > pd_tol;
  }
  return rep;
}

StationaryLimit stationary_limit(const ParamVector& theta, double sigma2,
                                 double tol) {
  if (!(sigma2 > 0)) throw InvalidArgument("sigma2 must be positive");
  if (classify_region(char_roots(theta, tol)).kind != RegionClass::Kind::Stable)
    throw NotStable("stationary limit requires all roots strictly inside the unit circle");
  const int p = theta.order();
  Eigen::MatrixXd noise = Eigen::MatrixXd::Zero(p, p);
  noise(0, 0) = sigma2;
  StationaryLimit out;
  out.F = solve_stein(companion_matrix(theta), noise);
  out.trace_F = out.F.trace();
  out.Lambda = double(p) * out.F / out.trace_F;
  return out;
}

}  // namespace seqar
