#ifndef SEQAR_BROWNIAN_HPP
#define SEQAR_BROWNIAN_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace seqar {

/// Largest horizon a nu sample may reach before giving up.
inline constexpr double kMaxNuHorizon = 1e6;
/// Grids coarser than this trigger a warning on std::clog.
inline constexpr std::size_t kMinStepsPerUnit = 100;

struct BrownianConfig {
  std::size_t steps_per_unit = 10000;
  /// Initial horizon; sample_nu doubles it as needed.
  double horizon = 1.0;
  std::uint64_t seed = 0;
};

/// Discretised standard Brownian motions on [0, horizon], W(0) = 0. Column j
/// is path j, row k is time k dt.
struct BrownianPaths {
  Eigen::MatrixXd values;
  double dt = 0;

  std::size_t steps() const { return static_cast<std::size_t>(values.rows()) - 1; }
  int count() const { return static_cast<int>(values.cols()); }
};

BrownianPaths brownian_paths(int count, const BrownianConfig& cfg);

/// Number of independent paths the functional J_kind needs.
int functional_paths(int kind);
/// Weights w with J = sum_j w_j int_0^t W_j(s)^2 ds. `mu` holds mu_1 for J3,
/// mu_2 for J4 and (mu_3, mu_4) for J5.
std::vector<double> functional_weights(int kind, std::span<const double> mu);
/// J-kind backing nu_i: nu1, nu2 -> J1; nu3 -> J2; nu4 -> J3; nu5, nu6 -> J4;
/// nu7 -> J5.
int functional_for_nu(int i);

/// Left-endpoint sum of J_kind up to t rounded down to the grid, capped at
/// the path horizon.
double functional_J(int kind, const BrownianPaths& paths,
                    std::span<const double> mu, double t);

/// n draws of nu_i = inf{t : J(t) >= 1}, each reported as the left end of the
/// grid interval over which the running sum reaches 1. Sample s uses its own stream seeded with
/// cfg.seed ^ s, so samples do not depend on `jobs`.
std::vector<double> sample_nu(int i, std::span<const double> mu,
                              const BrownianConfig& cfg, std::size_t n,
                              int jobs = 1);

/// Paired nu samples on the grid of cfg and on a grid `refine` times finer,
/// driven by the same Brownian paths.
struct RefinedNuSamples {
  std::vector<double> coarse;
  std::vector<double> fine;
};

RefinedNuSamples sample_nu_refined(int i, std::span<const double> mu,
                                   const BrownianConfig& cfg, std::size_t refine,
                                   std::size_t n, int jobs = 1);

}  // namespace seqar

#endif  // SEQAR_BROWNIAN_HPP
