#include "seqar/report.hpp"

#include "seqar/stats.hpp"

namespace seqar {

using nlohmann::json;

namespace {

json optional_number(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

json quantile_table(const std::vector<double>& values) {
  json out = json::object();
  if (values.empty()) return out;
  for (std::size_t i = 0; i < kReportLevels.size(); ++i) {
    const int pct = static_cast<int>(kReportLevels[i] * 100 + 0.5);
    out["q" + std::to_string(pct)] = values[i];
  }
  return out;
}

}  // namespace

const char* version() { return SEQAR_VERSION; }

json to_json(const RegionClass& r) {
  json out = {{"class", r.name()}};
  out["phi"] = optional_number(r.phi);
  return out;
}

json to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

json to_json(const RootSet& roots) {
  json out = json::array();
  for (const Root& r : roots.roots)
    out.push_back({{"re", r.value.real()},
                   {"im", r.value.imag()},
                   {"modulus", std::abs(r.value)},
                   {"multiplicity", r.multiplicity},
                   {"on_unit_circle", r.on_unit_circle}});
  return out;
}

json to_json(const ConditionReport& rep) {
  json out;
  out["region"] = to_json(rep.region);
  out["cond1"] = rep.cond1;
  out["cond2"] = rep.cond2;
  out["cond3"] = rep.cond3;
  out["all"] = rep.all();
  out["rho"] = rep.roots.rho;
  out["roots"] = to_json(rep.roots);
  out["kappa"] = rep.kappa ? to_json(*rep.kappa) : json(nullptr);
  out["L"] = rep.L ? to_json(*rep.L) : json(nullptr);
  out["min_eig_L"] = optional_number(rep.min_eig_L);
  out["kappa_condition"] = optional_number(rep.kappa_condition);
  return out;
}

json to_json(const LimitSpec& spec) {
  json out;
  out["gamma"] = spec.gamma.name();
  out["nu_index"] = spec.nu_index();
  out["b"] = spec.b;
  out["b_squared"] = spec.b2;
  out["mu"] = spec.mu;
  out["phi"] = optional_number(spec.phi);
  out["sigma2"] = spec.sigma2;
  out["Q"] = to_json(spec.Q);
  out["kappa"] = to_json(spec.kappa);
  out["experimental"] = spec.experimental;
  const UnitFactorization& f = spec.factorization;
  out["factorization"] = {{"delta1", f.delta1},
                          {"delta2", f.delta2},
                          {"delta3", f.delta3},
                          {"stable_coeffs", to_json(f.stable_coeffs)}};
  return out;
}

json to_json(const SequentialResult& res) {
  json out;
  out["p"] = res.theta_hat.size();
  out["h"] = res.h;
  out["sigma2"] = res.sigma2;
  out["tau"] = res.tau;
  out["theta_hat"] = to_json(res.theta_hat);
  out["trace"] = res.trace;
  out["overshoot"] = res.overshoot;
  out["stopped"] = res.stopped;
  return out;
}

json to_json(const DistributionReport& rep, bool timing) {
  json out;
  out["experiment"] = rep.experiment;
  if (!rep.mode.empty()) out["mode"] = rep.mode;
  out["region"] = to_json(rep.region);
  out["replications"] = rep.replications;
  out["stopped"] = rep.stopped;
  out["non_stopped"] = rep.non_stopped;
  out["overflowed"] = rep.overflowed;
  out["passed"] = rep.passed;
  if (!rep.failure.empty()) out["failure"] = rep.failure;
  if (rep.experiment == "normality") {
    out["ks_normal"] = rep.ks_normal;
    json q = json::array();
    for (const auto& coord : rep.residual_quantiles) q.push_back(quantile_table(coord));
    out["residual_quantiles"] = q;
  } else {
    out["statistic"] = rep.mode == "boundary" ? "tau/(b*sqrt(h))" : "tau/h";
    out["statistic_quantiles"] = quantile_table(rep.statistic_quantiles);
    if (rep.mode == "boundary") {
      out["nu_index"] = rep.nu_index;
      out["b"] = optional_number(rep.b);
      out["mu"] = rep.mu;
      out["reference_quantiles"] = quantile_table(rep.reference_quantiles);
      out["ks_two_sample"] = optional_number(rep.ks_two_sample);
    } else {
      out["limit"] = optional_number(rep.limit);
      out["median"] = optional_number(rep.median_statistic);
      out["deviation"] = optional_number(rep.deviation);
    }
  }
  if (timing) out["wall_clock_seconds"] = rep.wall_clock_seconds;
  return out;
}

json to_json(const FisherRatioReport& rep, bool timing) {
  json out;
  out["experiment"] = "fisher-ratio";
  out["L"] = to_json(rep.L);
  out["n"] = rep.n;
  out["m"] = rep.m;
  out["seeds"] = rep.terminal.size();
  out["norm"] = "frobenius";
  out["terminal"] = {{"median", rep.median_terminal}, {"q90", rep.q90_terminal}};
  out["running_max"] = {{"median", rep.median_max}, {"q90", rep.q90_max}};
  out["terminal_values"] = rep.terminal;
  out["running_max_values"] = rep.running_max;
  if (timing) out["wall_clock_seconds"] = rep.wall_clock_seconds;
  return out;
}

json envelope(const std::string& command, json config, json result) {
  json out;
  out["schema"] = kSchemaVersion;
  out["command"] = command;
  out["run"] = {{"version", version()}, {"config", std::move(config)}};
  out["result"] = std::move(result);
  return out;
}

}  // namespace seqar
