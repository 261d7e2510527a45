#ifndef SEQAR_EXPERIMENTS_HPP
#define SEQAR_EXPERIMENTS_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "seqar/estimator.hpp"
#include "seqar/polyroots.hpp"
#include "seqar/process.hpp"
#include "seqar/types.hpp"

namespace seqar {

/// Share of replications allowed to end without stopping.
inline constexpr double kMaxNonStopShare = 0.01;

struct ExperimentConfig {
  ParamVector theta{0.0};
  NoiseSpec noise;
  double h = 0;
  std::size_t replications = 0;
  std::uint64_t seed = 0;
  std::size_t max_n = kDefaultMaxN;
  int jobs = 1;
  /// Run even when conditions 1-3 fail.
  bool allow_unchecked = false;
  /// Grid of the nu samples drawn by stopping_experiment.
  std::size_t steps_per_unit = 10000;
  double tol = kDefaultUnitTol;
};

/// Outcome of normality_experiment or stopping_experiment. Raw per-replication
/// values are kept in replication order.
struct DistributionReport {
  std::string experiment;  // "normality" or "stopping"
  std::string mode;        // stopping only: "boundary" or "stable"
  RegionClass region;
  std::size_t replications = 0;
  std::size_t stopped = 0;
  std::size_t non_stopped = 0;
  /// Replications that ended on a non-finite observation (part of non_stopped).
  std::size_t overflowed = 0;
  bool passed = true;
  std::string failure;

  /// normality: one row per stopped replication, M^{1/2}(theta_hat - theta)/sigma.
  Eigen::MatrixXd residuals;
  std::vector<double> ks_normal;
  std::vector<std::vector<double>> residual_quantiles;

  std::vector<std::size_t> taus;  // 0 for replications that did not stop
  /// stopping: tau/(b sqrt h) in boundary mode, tau/h in stable mode.
  std::vector<double> statistic;
  std::vector<double> statistic_quantiles;
  /// boundary mode: nu_i samples and their two-sample distance to statistic.
  std::vector<double> reference;
  std::vector<double> reference_quantiles;
  std::optional<double> ks_two_sample;
  std::optional<double> b;
  std::vector<double> mu;
  int nu_index = 0;
  /// stable mode: sigma2 / tr F and median(tau/h) minus it.
  std::optional<double> limit;
  std::optional<double> median_statistic;
  std::optional<double> deviation;

  double wall_clock_seconds = 0;
};

/// Normalised residual coordinates over independent sequential estimates,
/// each compared with the standard normal by one-sample KS.
DistributionReport normality_experiment(const ExperimentConfig& cfg);

/// tau(h)/(b sqrt h) against nu_i for boundary theta, tau(h)/h against
/// sigma2 / tr F for stable theta.
DistributionReport stopping_experiment(const ExperimentConfig& cfg);

struct FisherRatioConfig {
  ParamVector theta{0.0};
  NoiseSpec noise;
  std::size_t n = 0;
  std::size_t seeds = 0;
  /// Start of the running-maximum window; 0 picks max(2, n / 10).
  std::size_t m = 0;
  std::uint64_t seed = 0;
  int jobs = 1;
  bool allow_unchecked = false;
};

/// Frobenius deviation ||M_k / sum x_{j-1}^2 - L|| per seed.
struct FisherRatioReport {
  Eigen::MatrixXd L;
  std::size_t n = 0;
  std::size_t m = 0;
  std::vector<double> terminal;     // at k = n
  std::vector<double> running_max;  // max over k in [m, n]
  double median_terminal = 0;
  double q90_terminal = 0;
  double median_max = 0;
  double q90_max = 0;
  double wall_clock_seconds = 0;
};

FisherRatioReport fisher_ratio_experiment(const FisherRatioConfig& cfg);

}  // namespace seqar

#endif  // SEQAR_EXPERIMENTS_HPP
