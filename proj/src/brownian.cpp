#include "seqar/brownian.hpp"

#include <cmath>
#include <iostream>
#include <random>
#include <string>

#include "seqar/errors.hpp"
#include "seqar/parallel.hpp"

namespace seqar {

namespace {

void check_grid(const BrownianConfig& cfg) {
  if (cfg.steps_per_unit < 1) throw InvalidArgument("steps_per_unit must be >= 1");
  if (!(cfg.horizon > 0) || !std::isfinite(cfg.horizon))
    throw InvalidArgument("horizon must be positive and finite");
  if (cfg.steps_per_unit < kMinStepsPerUnit)
    std::clog << "warning: steps_per_unit = " << cfg.steps_per_unit
              << " is too coarse for distributional use (want >= "
              << kMinStepsPerUnit << ")\n";
}

void check_kind(int kind) {
  if (kind < 1 || kind > 5) throw InvalidArgument("functional kind must be 1..5");
}

std::uint64_t sample_seed(std::uint64_t seed, std::size_t s) {
  return seed ^ static_cast<std::uint64_t>(s);
}

[[noreturn]] void horizon_exceeded(int i, std::size_t s) {
  throw Error("nu" + std::to_string(i) + " sample " + std::to_string(s) +
              " did not cross 1 before t = 1e6");
}

// One first passage on the grid with spacing dt. The sum over interval
// [t_k, t_{k+1}) uses W(t_k); the crossing is reported as t_k.
double first_passage(const std::vector<double>& w, double dt, std::mt19937_64& eng,
                     int i, std::size_t s, double horizon) {
  const std::size_t m = w.size();
  std::vector<double> pos(m, 0.0);
  std::normal_distribution<double> step(0.0, std::sqrt(dt));
  double sum = 0;  // running sum of w_j W_j^2, times dt gives J
  double limit = horizon;
  for (std::size_t k = 0;; ++k) {
    const double t = static_cast<double>(k) * dt;
    if (t > limit) {
      limit *= 2;
      if (limit > kMaxNuHorizon) horizon_exceeded(i, s);
    }
    double inc = 0;
    for (std::size_t j = 0; j < m; ++j) inc += w[j] * pos[j] * pos[j];
    sum += inc;
    if (sum * dt >= 1.0) return t;
    for (std::size_t j = 0; j < m; ++j) pos[j] += step(eng);
  }
}

}  // namespace

BrownianPaths brownian_paths(int count, const BrownianConfig& cfg) {
  if (count < 1) throw InvalidArgument("path count must be >= 1");
  check_grid(cfg);
  const double dt = 1.0 / static_cast<double>(cfg.steps_per_unit);
  const auto steps = static_cast<Eigen::Index>(
      std::ceil(cfg.horizon * static_cast<double>(cfg.steps_per_unit) - 1e-9));
  BrownianPaths out;
  out.dt = dt;
  out.values = Eigen::MatrixXd::Zero(steps + 1, count);
  for (int j = 0; j < count; ++j) {
    std::mt19937_64 eng(sample_seed(cfg.seed, static_cast<std::size_t>(j)));
    std::normal_distribution<double> step(0.0, std::sqrt(dt));
    for (Eigen::Index k = 1; k <= steps; ++k)
      out.values(k, j) = out.values(k - 1, j) + step(eng);
  }
  return out;
}

int functional_paths(int kind) {
  check_kind(kind);
  static constexpr int paths[] = {1, 2, 2, 3, 4};
  return paths[kind - 1];
}

std::vector<double> functional_weights(int kind, std::span<const double> mu) {
  check_kind(kind);
  const std::size_t need = kind == 3 || kind == 4 ? 1 : kind == 5 ? 2 : 0;
  if (mu.size() < need)
    throw InvalidArgument("J" + std::to_string(kind) + " needs " +
                          std::to_string(need) + " mu value(s)");
  switch (kind) {
    case 1: return {1.0};
    case 2: return {1.0, 1.0};
    case 3: return {1.0, mu[0]};
    case 4: return {1.0, 1.0, mu[0]};
    default: return {1.0, 1.0, mu[0], mu[1]};
  }
}

int functional_for_nu(int i) {
  static constexpr int kinds[] = {1, 1, 2, 3, 4, 4, 5};
  if (i < 1 || i > 7) throw InvalidArgument("nu index must be 1..7");
  return kinds[i - 1];
}

double functional_J(int kind, const BrownianPaths& paths,
                    std::span<const double> mu, double t) {
  const std::vector<double> w = functional_weights(kind, mu);
  if (paths.count() < static_cast<int>(w.size()))
    throw InvalidArgument("J" + std::to_string(kind) + " needs " +
                          std::to_string(w.size()) + " paths");
  if (!(t >= 0)) throw InvalidArgument("t must be >= 0");
  const auto m = std::min<Eigen::Index>(
      static_cast<Eigen::Index>(std::floor(t / paths.dt + 1e-9)),
      static_cast<Eigen::Index>(paths.steps()));
  double total = 0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    const auto col = paths.values.col(static_cast<Eigen::Index>(j)).head(m);
    total += w[j] * (col.squaredNorm() * paths.dt);
  }
  return total;
}

std::vector<double> sample_nu(int i, std::span<const double> mu,
                              const BrownianConfig& cfg, std::size_t n, int jobs) {
  const std::vector<double> w = functional_weights(functional_for_nu(i), mu);
  check_grid(cfg);
  const double dt = 1.0 / static_cast<double>(cfg.steps_per_unit);
  std::vector<double> out(n);
  parallel_for(n, jobs, [&](std::size_t s) {
    std::mt19937_64 eng(sample_seed(cfg.seed, s));
    out[s] = first_passage(w, dt, eng, i, s, cfg.horizon);
  });
  return out;
}

RefinedNuSamples sample_nu_refined(int i, std::span<const double> mu,
                                   const BrownianConfig& cfg, std::size_t refine,
                                   std::size_t n, int jobs) {
  const std::vector<double> w = functional_weights(functional_for_nu(i), mu);
  check_grid(cfg);
  if (refine < 1) throw InvalidArgument("refinement factor must be >= 1");
  const double dt = 1.0 / static_cast<double>(cfg.steps_per_unit);
  const double dt_fine = dt / static_cast<double>(refine);
  const std::size_t m = w.size();

  RefinedNuSamples out;
  out.coarse.resize(n);
  out.fine.resize(n);
  parallel_for(n, jobs, [&](std::size_t s) {
    std::mt19937_64 eng(sample_seed(cfg.seed, s));
    std::normal_distribution<double> step(0.0, std::sqrt(dt_fine));
    std::vector<double> pos(m, 0.0);
    double sum_fine = 0, sum_coarse = 0;
    bool fine_done = false, coarse_done = false;
    double limit = cfg.horizon;
    for (std::size_t k = 0; !(fine_done && coarse_done); ++k) {
      const double t = static_cast<double>(k) * dt_fine;
      if (t > limit) {
        limit *= 2;
        if (limit > kMaxNuHorizon) horizon_exceeded(i, s);
      }
      double inc = 0;
      for (std::size_t j = 0; j < m; ++j) inc += w[j] * pos[j] * pos[j];
      if (!fine_done) {
        sum_fine += inc;
        if (sum_fine * dt_fine >= 1.0) {
          out.fine[s] = t;
          fine_done = true;
        }
      }
      if (!coarse_done && k % refine == 0) {
        sum_coarse += inc;
        if (sum_coarse * dt >= 1.0) {
          out.coarse[s] = static_cast<double>(k / refine) * dt;
          coarse_done = true;
        }
      }
      for (std::size_t j = 0; j < m; ++j) pos[j] += step(eng);
    }
  });
  return out;
}

}  // namespace seqar
