#include "seqar/estimator.hpp"

namespace seqar {

SequentialResult sequential_estimate(std::span<const double> series, int p,
                                     double h, double sigma2,
                                     std::size_t max_n) {
  std::size_t i = 0;
  auto next = [&]() -> std::optional<double> {
    if (i == series.size()) return std::nullopt;
    return series[i++];
  };
  return sequential_estimate(next, p, h, sigma2, max_n);
}

Eigen::VectorXd normalized_residual(const SequentialResult& res,
                                    const ParamVector& theta_true,
                                    double sigma) {
  if (!res.stopped)
    throw InvalidArgument("normalized residual needs a stopped result");
  if (!(sigma > 0)) throw InvalidArgument("sigma must be positive");
  if (theta_true.order() != res.theta_hat.size())
    throw InvalidArgument("theta dimension does not match the estimate");
  return sym_sqrt(res.M_tau) * (res.theta_hat - theta_true.coeffs()) / sigma;
}

}  // namespace seqar
