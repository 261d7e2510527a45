#include "seqar/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "seqar/brownian.hpp"
#include "seqar/conditions.hpp"
#include "seqar/errors.hpp"
#include "seqar/limits.hpp"
#include "seqar/parallel.hpp"
#include "seqar/stats.hpp"

namespace seqar {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Seed offset for the nu samples so they never share a stream with a
// replication.
constexpr std::uint64_t kNuStream = std::uint64_t{1} << 63;

struct Replication {
  SequentialResult result;
  bool overflow = false;
};

void validate(const ExperimentConfig& cfg) {
  if (cfg.replications < 1) throw InvalidArgument("replications must be >= 1");
  if (!(cfg.h > 0) || !std::isfinite(cfg.h))
    throw InvalidArgument("threshold h must be positive");
  if (cfg.max_n < 1) throw InvalidArgument("max_n must be >= 1");
}

std::vector<Replication> run_replications(const ExperimentConfig& cfg) {
  std::vector<Replication> out(cfg.replications);
  const int p = cfg.theta.order();
  parallel_for(cfg.replications, cfg.jobs, [&](std::size_t i) {
    ArStream stream(cfg.theta, cfg.noise, replication_seed(cfg.seed, i));
    try {
      out[i].result =
          sequential_estimate(stream, p, cfg.h, cfg.noise.sigma2, cfg.max_n);
    } catch (const OverflowDetected&) {
      out[i].overflow = true;
    }
  });
  return out;
}

void tally(DistributionReport& rep, const std::vector<Replication>& reps) {
  rep.replications = reps.size();
  rep.taus.assign(reps.size(), 0);
  for (std::size_t i = 0; i < reps.size(); ++i) {
    if (reps[i].overflow) ++rep.overflowed;
    if (!reps[i].overflow && reps[i].result.stopped) {
      ++rep.stopped;
      rep.taus[i] = reps[i].result.tau;
    }
  }
  rep.non_stopped = rep.replications - rep.stopped;
  if (static_cast<double>(rep.non_stopped) >
      kMaxNonStopShare * static_cast<double>(rep.replications)) {
    rep.passed = false;
    rep.failure = std::to_string(rep.non_stopped) + " of " +
                  std::to_string(rep.replications) +
                  " replications did not stop within max_n";
  }
  if (rep.stopped == 0) {
    rep.passed = false;
    if (rep.failure.empty()) rep.failure = "no replication stopped";
  }
}

}  // namespace

DistributionReport normality_experiment(const ExperimentConfig& cfg) {
  const auto start = Clock::now();
  validate(cfg);
  const ConditionReport cond = check_conditions(cfg.theta, cfg.tol);
  if (!cond.all() && !cfg.allow_unchecked)
    throw InvalidArgument("theta violates conditions 1-3 (cond1=" +
                          std::to_string(cond.cond1) + " cond2=" +
                          std::to_string(cond.cond2) + " cond3=" +
                          std::to_string(cond.cond3) +
                          "); pass allow_unchecked to run anyway");

  DistributionReport rep;
  rep.experiment = "normality";
  rep.region = cond.region;
  const std::vector<Replication> reps = run_replications(cfg);
  tally(rep, reps);

  const int p = cfg.theta.order();
  const double sigma = std::sqrt(cfg.noise.sigma2);
  rep.residuals.resize(static_cast<Eigen::Index>(rep.stopped), p);
  Eigen::Index row = 0;
  for (const Replication& r : reps) {
    if (r.overflow || !r.result.stopped) continue;
    rep.residuals.row(row++) =
        normalized_residual(r.result, cfg.theta, sigma).transpose();
  }
  if (rep.stopped > 0) {
    for (int j = 0; j < p; ++j) {
      const Eigen::VectorXd col = rep.residuals.col(j);
      const std::span<const double> v(col.data(), static_cast<std::size_t>(col.size()));
      rep.ks_normal.push_back(ks_one_sample(v, normal_cdf));
      rep.residual_quantiles.push_back(quantiles(v, kReportLevels));
    }
  }
  rep.wall_clock_seconds = seconds_since(start);
  return rep;
}

DistributionReport stopping_experiment(const ExperimentConfig& cfg) {
  const auto start = Clock::now();
  validate(cfg);
  DistributionReport rep;
  rep.experiment = "stopping";
  rep.region = classify_region(cfg.theta, cfg.tol);

  std::optional<LimitSpec> spec;
  switch (rep.region.kind) {
    case RegionClass::Kind::Stable:
      rep.mode = "stable";
      rep.limit = tau_limit_stable(cfg.theta, cfg.noise.sigma2, cfg.tol);
      break;
    case RegionClass::Kind::Boundary:
      rep.mode = "boundary";
      spec = limit_constants(cfg.theta, cfg.noise.sigma2, cfg.tol);
      rep.b = spec->b;
      rep.mu = spec->mu;
      rep.nu_index = spec->nu_index();
      break;
    case RegionClass::Kind::BoundaryOther:
      throw UnsupportedBoundary("stopping_experiment needs a stable or Gamma1..Gamma7 theta");
    case RegionClass::Kind::Explosive:
      throw InvalidArgument("stopping_experiment needs a stable or Gamma1..Gamma7 theta");
  }

  const std::vector<Replication> reps = run_replications(cfg);
  tally(rep, reps);

  const double scale = spec ? spec->b * std::sqrt(cfg.h) : cfg.h;
  for (std::size_t i = 0; i < reps.size(); ++i)
    if (rep.taus[i] > 0)
      rep.statistic.push_back(static_cast<double>(rep.taus[i]) / scale);
  if (!rep.statistic.empty())
    rep.statistic_quantiles = quantiles(rep.statistic, kReportLevels);

  if (spec) {
    BrownianConfig bc;
    bc.steps_per_unit = cfg.steps_per_unit;
    bc.seed = cfg.seed ^ kNuStream;
    rep.reference = sample_nu(rep.nu_index, rep.mu, bc, cfg.replications, cfg.jobs);
    rep.reference_quantiles = quantiles(rep.reference, kReportLevels);
    if (!rep.statistic.empty())
      rep.ks_two_sample = ks_two_sample(rep.statistic, rep.reference);
  } else if (!rep.statistic.empty()) {
    rep.median_statistic = median(rep.statistic);
    rep.deviation = *rep.median_statistic - *rep.limit;
  }
  rep.wall_clock_seconds = seconds_since(start);
  return rep;
}

FisherRatioReport fisher_ratio_experiment(const FisherRatioConfig& cfg) {
  const auto start = Clock::now();
  if (cfg.n < 2) throw InvalidArgument("n must be >= 2");
  if (cfg.seeds < 1) throw InvalidArgument("seeds must be >= 1");
  const std::optional<Eigen::MatrixXd> L = build_L(cfg.theta);
  if (!L) throw InvalidArgument("L(theta) is undefined: the kappa system is singular");
  if (!cfg.allow_unchecked && !check_conditions(cfg.theta).cond3)
    throw InvalidArgument("L(theta) is not positive definite (cond3 fails)");

  FisherRatioReport rep;
  rep.L = *L;
  rep.n = cfg.n;
  rep.m = cfg.m ? cfg.m : std::max<std::size_t>(2, cfg.n / 10);
  if (rep.m > cfg.n) throw InvalidArgument("m must not exceed n");
  rep.terminal.assign(cfg.seeds, 0.0);
  rep.running_max.assign(cfg.seeds, 0.0);

  const int p = cfg.theta.order();
  parallel_for(cfg.seeds, cfg.jobs, [&](std::size_t s) {
    ArStream stream(cfg.theta, cfg.noise, replication_seed(cfg.seed, s));
    FisherState state(p);
    double dev = 0, worst = 0;
    for (std::size_t k = 1; k <= cfg.n; ++k) {
      state.update(stream.next());
      if (k < rep.m && k < cfg.n) continue;
      const double energy = state.lag1_energy();
      dev = energy > 0 ? (state.M() / energy - rep.L).norm()
                       : std::numeric_limits<double>::infinity();
      worst = std::max(worst, dev);
    }
    rep.terminal[s] = dev;
    rep.running_max[s] = worst;
  });

  rep.median_terminal = median(rep.terminal);
  rep.q90_terminal = quantile(rep.terminal, 0.9);
  rep.median_max = median(rep.running_max);
  rep.q90_max = quantile(rep.running_max, 0.9);
  rep.wall_clock_seconds = seconds_since(start);
  return rep;
}

}  // namespace seqar
