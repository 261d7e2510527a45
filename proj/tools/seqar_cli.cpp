// seqar command-line front end.
//
// Exit codes: 0 success (or all conditions hold), 1 checked failure,
// 2 usage error, 3 runtime error.

#include <charconv>
#include <cmath>
#include <complex>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "seqar/brownian.hpp"
#include "seqar/conditions.hpp"
#include "seqar/errors.hpp"
#include "seqar/estimator.hpp"
#include "seqar/experiments.hpp"
#include "seqar/limits.hpp"
#include "seqar/process.hpp"
#include "seqar/report.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitChecked = 1;
constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::string_view rest(text);
  while (true) {
    const auto comma = rest.find(',');
    std::string_view item = rest.substr(0, comma);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (!item.empty() && item.front() == '+') item.remove_prefix(1);
    double v = 0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc() || ptr != item.data() + item.size() ||
        !std::isfinite(v))
      throw UsageError(std::string("malformed ") + what + " list '" + text + "'");
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

seqar::ParamVector parse_theta(const std::string& text) {
  return seqar::ParamVector(std::span<const double>(parse_list(text, "theta")));
}

json theta_json(const seqar::ParamVector& theta) { return theta.to_vector(); }

class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_.open(path);
    if (!file_) throw seqar::Error("cannot open output file '" + path + "'");
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

void write_json(const std::string& path, const json& doc) {
  Output out(path);
  out.stream() << doc.dump(2) << '\n';
}

// Options shared by the stochastic subcommands.
struct NoiseOptions {
  std::string noise;
  std::optional<double> sigma2;
  std::optional<std::uint64_t> seed;

  void add(CLI::App* app, bool noise_required, bool own_sigma2 = true) {
    auto* n = app->add_option("--noise", noise,
                              "gaussian|rademacher|uniform|table:v,..|impulse:v,..");
    if (noise_required) n->required();
    if (own_sigma2)
      app->add_option("--sigma2", sigma2, "noise variance (required for random noise)");
    app->add_option("--seed", seed, "64-bit seed (required for random noise)");
  }

  // Deterministic tables default to nominal variance 1 and need no seed.
  seqar::NoiseSpec resolve() const {
    const bool table = noise.starts_with("table:") || noise.starts_with("impulse:");
    if (!table) {
      if (!sigma2) throw UsageError("--sigma2 is required for noise '" + noise + "'");
      if (!seed) throw UsageError("--seed is required for noise '" + noise + "'");
    }
    try {
      return seqar::NoiseSpec::parse(noise, sigma2.value_or(1.0));
    } catch (const seqar::InvalidArgument& e) {
      throw UsageError(e.what());
    }
  }

  std::uint64_t seed_or_zero() const { return seed.value_or(0); }
};

json noise_json(const seqar::NoiseSpec& spec) {
  return {{"law", spec.describe()}, {"sigma2", spec.sigma2}};
}

// ---------------------------------------------------------------- check

struct CheckCmd {
  std::string theta;
  double tol = seqar::kDefaultUnitTol;
  double pd_tol = seqar::kDefaultPdTol;
  std::string output;

  void add(CLI::App& app) {
    auto* sub = app.add_subcommand("check", "conditions 1-3, kappa, L and region class");
    sub->add_option("--theta", theta, "comma-separated theta_1,...,theta_p")->required();
    sub->add_option("--tol", tol, "unit-circle tolerance");
    sub->add_option("--pd-tol", pd_tol, "positive-definiteness tolerance on L");
    sub->add_option("-o,--output", output, "JSON output path (default stdout)");
  }

  int run() const {
    const seqar::ParamVector th = parse_theta(theta);
    const seqar::ConditionReport rep = seqar::check_conditions(th, tol, pd_tol);
    const json config = {{"theta", theta_json(th)}, {"tol", tol}, {"pd_tol", pd_tol}};
    write_json(output, seqar::envelope("check", config, seqar::to_json(rep)));
    return rep.all() ? kExitOk : kExitChecked;
  }
};

// ------------------------------------------------------------- simulate

struct SimulateCmd {
  std::string theta;
  NoiseOptions noise;
  std::size_t n = 0;
  std::string output;

  void add(CLI::App& app) {
    auto* sub = app.add_subcommand("simulate", "simulate x_1..x_n as CSV");
    sub->add_option("--theta", theta, "comma-separated theta")->required();
    noise.add(sub, true);
    sub->add_option("--n", n, "number of observations")->required()->check(CLI::PositiveNumber);
    sub->add_option("-o,--output", output, "CSV output path (default stdout)");
  }

  int run() const {
    const seqar::SeriesBuffer buf =
        seqar::simulate(parse_theta(theta), noise.resolve(), n, noise.seed_or_zero());
    Output out(output);
    seqar::write_series_csv(out.stream(), buf.observed());
    return kExitOk;
  }
};

// ------------------------------------------------------------- estimate

struct EstimateCmd {
  std::string input;
  std::optional<int> theta_dim;
  std::string theta;
  NoiseOptions noise;
  std::optional<double> h;
  std::optional<double> sigma2;
  std::size_t max_n = seqar::kDefaultMaxN;
  std::string output;

  void add(CLI::App& app) {
    auto* sub = app.add_subcommand("estimate", "sequential estimate on a CSV series or a simulated stream");
    sub->add_option("--input", input, "CSV series with header k,x");
    sub->add_option("--theta-dim", theta_dim, "model order p (with --input)");
    sub->add_option("--theta", theta, "simulate from this theta instead of reading --input");
    noise.add(sub, false, false);
    sub->add_option("--h", h, "threshold h (stop when tr M_n >= h sigma2)")->required();
    sub->add_option("--sigma2", sigma2, "known noise variance")->required();
    sub->add_option("--max-n", max_n, "safety cap on the number of observations");
    sub->add_option("-o,--output", output, "JSON output path (default stdout)");
  }

  int run() const {
    if (!(*h > 0)) throw UsageError("--h must be positive");
    if (!(*sigma2 > 0)) throw UsageError("--sigma2 must be positive");
    json config = {{"h", *h}, {"sigma2", *sigma2}, {"max_n", max_n}};
    seqar::SequentialResult res;
    if (!input.empty()) {
      if (!theta.empty()) throw UsageError("use either --input or --theta, not both");
      if (!theta_dim) throw UsageError("--theta-dim is required with --input");
      if (*theta_dim < 1) throw UsageError("--theta-dim must be >= 1");
      std::ifstream in(input);
      if (!in) throw seqar::Error("cannot read input file '" + input + "'");
      const std::vector<double> series = seqar::read_series_csv(in);
      res = seqar::sequential_estimate(std::span<const double>(series), *theta_dim, *h,
                                       *sigma2, max_n);
      config["input"] = input;
      config["theta_dim"] = *theta_dim;
    } else {
      if (theta.empty()) throw UsageError("estimate needs --input or --theta");
      if (noise.noise.empty()) throw UsageError("--noise is required with --theta");
      const seqar::ParamVector th = parse_theta(theta);
      if (theta_dim && *theta_dim != th.order())
        throw UsageError("--theta-dim does not match the length of --theta");
      NoiseOptions resolved = noise;
      resolved.sigma2 = sigma2;
      const seqar::NoiseSpec spec = resolved.resolve();
      seqar::ArStream stream(th, spec, resolved.seed_or_zero());
      res = seqar::sequential_estimate(stream, th.order(), *h, *sigma2, max_n);
      config["theta"] = theta_json(th);
      config["noise"] = noise_json(spec);
      config["seed"] = resolved.seed_or_zero();
    }
    write_json(output, seqar::envelope("estimate", config, seqar::to_json(res)));
    return kExitOk;
  }
};

// --------------------------------------------------------------- limits

struct LimitsCmd {
  std::string theta;
  std::optional<double> sigma2;
  double tol = seqar::kDefaultUnitTol;
  std::string output;

  void add(CLI::App& app) {
    auto* sub = app.add_subcommand("limits", "Gamma class, b, mu and Q of a boundary theta");
    sub->add_option("--theta", theta, "comma-separated theta")->required();
    sub->add_option("--sigma2", sigma2, "noise variance")->required();
    sub->add_option("--tol", tol, "unit-circle tolerance");
    sub->add_option("-o,--output", output, "JSON output path (default stdout)");
  }

  int run() const {
    const seqar::ParamVector th = parse_theta(theta);
    const seqar::LimitSpec spec = seqar::limit_constants(th, *sigma2, tol);
    const json config = {{"theta", theta_json(th)}, {"sigma2", *sigma2}, {"tol", tol}};
    write_json(output, seqar::envelope("limits", config, seqar::to_json(spec)));
    return kExitOk;
  }
};

// ------------------------------------------------------------ nu-sample

struct NuSampleCmd {
  int index = 0;
  std::string mu;
  std::size_t n = 0;
  std::size_t steps_per_unit = 10000;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
  std::string output;

  void add(CLI::App& app) {
    auto* sub = app.add_subcommand("nu-sample", "samples of nu_i as CSV k,nu");
    sub->add_option("--index", index, "i in 1..7")->required()->check(CLI::Range(1, 7));
    sub->add_option("--mu", mu, "comma-separated mu values for nu4..nu7");
    sub->add_option("--n", n, "number of samples")->required()->check(CLI::PositiveNumber);
    sub->add_option("--steps-per-unit", steps_per_unit, "grid resolution");
    sub->add_option("--seed", seed, "64-bit seed")->required();
    sub->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("-o,--output", output, "CSV output path (default stdout)");
  }

  int run() const {
    const std::vector<double> mus = mu.empty() ? std::vector<double>{} : parse_list(mu, "mu");
    seqar::BrownianConfig cfg;
    cfg.steps_per_unit = steps_per_unit;
    cfg.seed = *seed;
    const std::vector<double> nu = seqar::sample_nu(index, mus, cfg, n, jobs);
    Output out(output);
    out.stream() << "k,nu\n";
    for (std::size_t k = 0; k < nu.size(); ++k)
      out.stream() << (k + 1) << ',' << seqar::format_double(nu[k]) << '\n';
    return kExitOk;
  }
};

// ----------------------------------------------------------- experiment

struct ExperimentCmd {
  std::string theta;
  NoiseOptions noise;
  std::optional<double> h;
  std::size_t replications = 0;
  std::size_t max_n = seqar::kDefaultMaxN;
  std::size_t steps_per_unit = 10000;
  double tol = seqar::kDefaultUnitTol;
  bool allow_unchecked = false;
  int jobs = 1;
  bool timing = false;
  std::string output;
  std::string dump_csv;

  // fisher-ratio
  std::size_t n = 0;
  std::size_t seeds = 0;
  std::size_t m = 0;

  CLI::App* normality = nullptr;
  CLI::App* stopping = nullptr;
  CLI::App* fisher = nullptr;

  void add_common(CLI::App* sub) {
    sub->add_option("--theta", theta, "comma-separated theta")->required();
    noise.add(sub, true);
    sub->add_option("--jobs", jobs, "worker threads (output does not depend on it)")
        ->check(CLI::PositiveNumber);
    sub->add_flag("--allow-unchecked", allow_unchecked, "run even when conditions 1-3 fail");
    sub->add_flag("--timing", timing, "add wall-clock seconds to the report");
    sub->add_option("-o,--output", output, "JSON output path (default stdout)");
  }

  void add_distribution(CLI::App* sub) {
    add_common(sub);
    sub->add_option("--h", h, "threshold h")->required();
    sub->add_option("--replications", replications, "independent runs")
        ->required()
        ->check(CLI::PositiveNumber);
    sub->add_option("--max-n", max_n, "per-replication cap on observations");
    sub->add_option("--tol", tol, "unit-circle tolerance");
    sub->add_option("--dump-csv", dump_csv, "write raw per-replication values to this CSV");
  }

  void add(CLI::App& app) {
    auto* exp = app.add_subcommand("experiment", "Monte Carlo harnesses");
    exp->require_subcommand(1);
    normality = exp->add_subcommand("normality", "normalised residuals against N(0,1)");
    add_distribution(normality);
    stopping = exp->add_subcommand("stopping", "stopping-time law against nu_i or sigma2/trF");
    add_distribution(stopping);
    stopping->add_option("--steps-per-unit", steps_per_unit, "grid of the nu samples");
    fisher = exp->add_subcommand("fisher-ratio", "||M_n / sum x^2 - L|| across seeds");
    add_common(fisher);
    fisher->add_option("--n", n, "series length")->required()->check(CLI::PositiveNumber);
    fisher->add_option("--seeds", seeds, "number of seeds")->required()->check(CLI::PositiveNumber);
    fisher->add_option("--m", m, "start of the running-max window (default n/10)");
  }

  bool parsed() const { return normality->parsed() || stopping->parsed() || fisher->parsed(); }

  int run() const {
    const seqar::ParamVector th = parse_theta(theta);
    const seqar::NoiseSpec spec = noise.resolve();
    if (fisher->parsed()) return run_fisher(th, spec);

    seqar::ExperimentConfig cfg;
    cfg.theta = th;
    cfg.noise = spec;
    cfg.h = *h;
    cfg.replications = replications;
    cfg.seed = noise.seed_or_zero();
    cfg.max_n = max_n;
    cfg.jobs = jobs;
    cfg.allow_unchecked = allow_unchecked;
    cfg.steps_per_unit = steps_per_unit;
    cfg.tol = tol;
    const bool is_norm = normality->parsed();
    const seqar::DistributionReport rep =
        is_norm ? seqar::normality_experiment(cfg) : seqar::stopping_experiment(cfg);

    json config = {{"theta", theta_json(th)},  {"noise", noise_json(spec)},
                   {"h", cfg.h},               {"replications", cfg.replications},
                   {"seed", cfg.seed},         {"max_n", cfg.max_n},
                   {"tol", cfg.tol},           {"allow_unchecked", cfg.allow_unchecked}};
    if (!is_norm) config["steps_per_unit"] = cfg.steps_per_unit;
    const std::string name = is_norm ? "experiment normality" : "experiment stopping";
    write_json(output, seqar::envelope(name, config, seqar::to_json(rep, timing)));
    if (!dump_csv.empty()) write_dump(rep);
    return rep.passed ? kExitOk : kExitChecked;
  }

  int run_fisher(const seqar::ParamVector& th, const seqar::NoiseSpec& spec) const {
    seqar::FisherRatioConfig cfg;
    cfg.theta = th;
    cfg.noise = spec;
    cfg.n = n;
    cfg.seeds = seeds;
    cfg.m = m;
    cfg.seed = noise.seed_or_zero();
    cfg.jobs = jobs;
    cfg.allow_unchecked = allow_unchecked;
    const seqar::FisherRatioReport rep = seqar::fisher_ratio_experiment(cfg);
    const json config = {{"theta", theta_json(th)}, {"noise", noise_json(spec)},
                         {"n", cfg.n},              {"seeds", cfg.seeds},
                         {"m", rep.m},              {"seed", cfg.seed},
                         {"allow_unchecked", cfg.allow_unchecked}};
    write_json(output,
               seqar::envelope("experiment fisher-ratio", config, seqar::to_json(rep, timing)));
    return kExitOk;
  }

  void write_dump(const seqar::DistributionReport& rep) const {
    Output out(dump_csv);
    std::ostream& os = out.stream();
    if (rep.experiment == "normality") {
      os << "replication,tau";
      for (Eigen::Index j = 0; j < rep.residuals.cols(); ++j) os << ",r" << (j + 1);
      os << '\n';
      Eigen::Index row = 0;
      for (std::size_t i = 0; i < rep.taus.size(); ++i) {
        if (rep.taus[i] == 0) continue;
        os << i << ',' << rep.taus[i];
        for (Eigen::Index j = 0; j < rep.residuals.cols(); ++j)
          os << ',' << seqar::format_double(rep.residuals(row, j));
        os << '\n';
        ++row;
      }
    } else {
      os << "replication,tau,statistic\n";
      std::size_t k = 0;
      for (std::size_t i = 0; i < rep.taus.size(); ++i) {
        if (rep.taus[i] == 0) continue;
        os << i << ',' << rep.taus[i] << ',' << seqar::format_double(rep.statistic[k++])
           << '\n';
      }
    }
  }
};

// ----------------------------------------------------------- make-theta

struct MakeThetaCmd {
  std::vector<std::string> roots;
  std::vector<double> unit_pairs;
  double tol = seqar::kDefaultUnitTol;
  std::string output;

  void add(CLI::App& app) {
    auto* sub = app.add_subcommand("make-theta", "theta whose characteristic roots are given");
    sub->add_option("--root", roots,
                    "root as re or re:im; complex roots add their conjugate")
        ->allow_extra_args(false);
    sub->add_option("--unit-pair", unit_pairs, "angle phi in radians of a pair e^{+-i phi}")
        ->allow_extra_args(false);
    sub->add_option("--tol", tol, "unit-circle tolerance for the region class");
    sub->add_option("-o,--output", output, "JSON output path (default stdout)");
  }

  int run() const {
    std::vector<std::complex<double>> zs;
    for (const std::string& r : roots) {
      const auto colon = r.find(':');
      const double re = parse_list(r.substr(0, colon), "root").at(0);
      double im = 0;
      if (colon != std::string::npos) im = parse_list(r.substr(colon + 1), "root").at(0);
      zs.emplace_back(re, im);
      if (im != 0) zs.emplace_back(re, -im);
    }
    for (double phi : unit_pairs) {
      zs.push_back(std::polar(1.0, phi));
      zs.push_back(std::polar(1.0, -phi));
    }
    if (zs.empty()) throw UsageError("make-theta needs at least one --root or --unit-pair");
    Eigen::VectorXd coeffs = seqar::theta_from_roots(zs).coeffs();
    // adding zero turns -0 into 0
    for (double& c : coeffs) c += 0.0;
    const seqar::ParamVector th(coeffs);
    std::string arg;
    for (int i = 0; i < th.order(); ++i)
      arg += (i ? "," : "") + seqar::format_double(th[i]);
    json config = {{"roots", roots}, {"unit_pairs", unit_pairs}, {"tol", tol}};
    json result = {{"theta", theta_json(th)},
                   {"theta_arg", arg},
                   {"region", seqar::to_json(seqar::classify_region(th, tol))}};
    write_json(output, seqar::envelope("make-theta", config, result));
    return kExitOk;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sequential least-squares estimation for AR(p) processes"};
  // subcommands inherit this; -h would collide with the threshold option --h
  app.set_help_flag("--help", "print this help and exit");
  app.set_version_flag("--version", std::string("seqar ") + seqar::version());
  app.set_config("--config", "", "TOML/INI file with option values; flags override it");
  app.require_subcommand(1);

  CheckCmd check;
  SimulateCmd simulate;
  EstimateCmd estimate;
  LimitsCmd limits;
  NuSampleCmd nu_sample;
  ExperimentCmd experiment;
  MakeThetaCmd make_theta;
  check.add(app);
  simulate.add(app);
  estimate.add(app);
  limits.add(app);
  nu_sample.add(app);
  experiment.add(app);
  make_theta.add(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (app.got_subcommand("check")) return check.run();
    if (app.got_subcommand("simulate")) return simulate.run();
    if (app.got_subcommand("estimate")) return estimate.run();
    if (app.got_subcommand("limits")) return limits.run();
    if (app.got_subcommand("nu-sample")) return nu_sample.run();
    if (app.got_subcommand("make-theta")) return make_theta.run();
    if (experiment.parsed()) return experiment.run();
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const seqar::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}
