#ifndef SEQAR_ESTIMATOR_HPP
#define SEQAR_ESTIMATOR_HPP

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <type_traits>
#include <utility>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include "seqar/types.hpp"

namespace seqar {

/// Reciprocal condition number below which M_n counts as singular.
inline constexpr double kSingularRcond = 1e-12;
inline constexpr std::size_t kDefaultMaxN = 100'000'000;

/// Running M_n = sum X_{k-1} X_{k-1}', S_n = sum X_{k-1} x_k and tr M_n over
/// a stream x_1, x_2, ... with zero presample.
template <typename Scalar>
class BasicFisherState {
 public:
  explicit BasicFisherState(int p)
      : M_(Matrix<Scalar>::Zero(p, p)),
        S_(Vector<Scalar>::Zero(p)),
        lags_(Vector<Scalar>::Zero(p)) {
    if (p < 1) throw InvalidArgument("order p must be >= 1");
  }

  /// Folds in x_{n+1}, using X_n = (x_n, ..., x_{n-p+1}) from before the call.
  void update(Scalar x_new) {
    using std::isfinite;
    if (!isfinite(x_new)) throw InvalidArgument("observation must be finite");
    M_.noalias() += lags_ * lags_.transpose();
    S_.noalias() += lags_ * x_new;
    trace_ = M_.trace();
    const Eigen::Index p = lags_.size();
    for (Eigen::Index i = p - 1; i > 0; --i) lags_[i] = lags_[i - 1];
    lags_[0] = x_new;
    ++n_;
  }

  int order() const { return static_cast<int>(lags_.size()); }
  std::size_t n() const { return n_; }
  const Matrix<Scalar>& M() const { return M_; }
  const Vector<Scalar>& S() const { return S_; }
  Scalar trace() const { return trace_; }
  /// X_n, the current lag window.
  const Vector<Scalar>& lag_window() const { return lags_; }
  /// sum_{k=1}^n x_{k-1}^2, the (1,1) entry of M_n.
  Scalar lag1_energy() const { return M_(0, 0); }

 private:
  Matrix<Scalar> M_;
  Vector<Scalar> S_;
  Vector<Scalar> lags_;
  Scalar trace_ = Scalar(0);
  std::size_t n_ = 0;
};

using FisherState = BasicFisherState<double>;

/// M_n^{-1} S_n, or zero when M_n is singular (rcond < kSingularRcond).
template <typename Scalar>
Vector<Scalar> lse(const BasicFisherState<Scalar>& state) {
  const Eigen::Index p = state.order();
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> eig(state.M());
  const auto& lambda = eig.eigenvalues();
  const Scalar lmax = lambda.maxCoeff();
  const Scalar lmin = lambda.minCoeff();
  if (!(lmax > Scalar(0)) || lmin / lmax < Scalar(kSingularRcond))
    return Vector<Scalar>::Zero(p);
  const auto& v = eig.eigenvectors();
  return v * ((v.transpose() * state.S()).array() / lambda.array()).matrix();
}

struct SequentialResult {
  std::size_t tau = 0;
  Eigen::VectorXd theta_hat;
  Eigen::MatrixXd M_tau;
  double trace = 0;
  /// tr M_tau - h sigma2
  double overshoot = 0;
  bool stopped = false;
  double h = 0;
  double sigma2 = 0;
};

/// Consumes observations until tr M_n >= h sigma2 for the first time.
///
/// `next` is called once per observation and returns either a double or a
/// std::optional<double>, an empty optional meaning the source is exhausted.
/// Exhaustion or reaching max_n yields stopped = false with the partial
/// state.
template <typename Source>
SequentialResult sequential_estimate(Source&& next, int p, double h,
                                     double sigma2,
                                     std::size_t max_n = kDefaultMaxN) {
  if (!(h > 0)) throw InvalidArgument("threshold h must be positive");
  if (!(sigma2 > 0)) throw InvalidArgument("sigma2 must be positive");
  FisherState state(p);
  const double threshold = h * sigma2;
  bool stopped = false;
  while (state.n() < max_n) {
    double x;
    if constexpr (std::is_same_v<std::decay_t<decltype(next())>,
                                 std::optional<double>>) {
      const std::optional<double> v = next();
      if (!v) break;
      x = *v;
    } else {
      x = next();
    }
    state.update(x);
    if (state.trace() >= threshold) {
      stopped = true;
      break;
    }
  }
  SequentialResult res;
  res.tau = state.n();
  res.theta_hat = lse(state);
  res.M_tau = state.M();
  res.trace = state.trace();
  res.overshoot = state.trace() - threshold;
  res.stopped = stopped;
  res.h = h;
  res.sigma2 = sigma2;
  return res;
}

SequentialResult sequential_estimate(std::span<const double> series, int p,
                                     double h, double sigma2,
                                     std::size_t max_n = kDefaultMaxN);

/// Symmetric PSD square root by eigendecomposition. Eigenvalues in
/// [-1e-12 max(1, lambda_max), 0) are clipped to zero; anything more negative,
/// or an asymmetric input, throws InvalidArgument.
template <typename Derived>
Matrix<typename Derived::Scalar> sym_sqrt(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  using std::abs;
  using std::sqrt;
  if (m.rows() != m.cols()) throw InvalidArgument("sym_sqrt needs a square matrix");
  const Matrix<Scalar> a = m;
  const Scalar scale = std::max(Scalar(1), a.cwiseAbs().maxCoeff());
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > Scalar(1e-12) * scale)
    throw InvalidArgument("sym_sqrt needs a symmetric matrix");
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> eig(a);
  Vector<Scalar> lambda = eig.eigenvalues();
  const Scalar floor = -Scalar(1e-12) * std::max(Scalar(1), lambda.maxCoeff());
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (lambda[i] < floor) throw InvalidArgument("sym_sqrt needs a PSD matrix");
    lambda[i] = lambda[i] > Scalar(0) ? sqrt(lambda[i]) : Scalar(0);
  }
  const auto& v = eig.eigenvectors();
  const Matrix<Scalar> r = v * lambda.asDiagonal() * v.transpose();
  // averaging with the transpose makes the result exactly symmetric
  return (r + r.transpose()) / Scalar(2);
}

/// M_tau^{1/2} (theta_hat - theta) / sigma; requires a stopped result.
Eigen::VectorXd normalized_residual(const SequentialResult& res,
                                    const ParamVector& theta_true, double sigma);

}  // namespace seqar

#endif  // SEQAR_ESTIMATOR_HPP
