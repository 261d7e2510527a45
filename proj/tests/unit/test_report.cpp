#include <catch_amalgamated.hpp>

#include "seqar/report.hpp"

using namespace seqar;
using nlohmann::json;

TEST_CASE("condition report JSON", "[report]") {
  const json j = to_json(check_conditions(ParamVector{0.5, -0.5}));
  CHECK(j["region"]["class"] == "Stable");
  CHECK(j["cond1"] == true);
  CHECK(j["cond3"] == true);
  CHECK(j["all"] == true);
  CHECK(j["kappa"].size() == 1);
  CHECK(j["kappa"][0].get<double>() == Catch::Approx(1.0 / 3.0));
  CHECK(j["L"].size() == 2);
  CHECK(j["roots"].size() == 2);

  const json s = to_json(check_conditions(ParamVector{0.0, 1.0}));
  CHECK(s["kappa"].is_null());
  CHECK(s["L"].is_null());
  CHECK(s["cond3"] == false);
  CHECK(s["region"]["class"] == "Gamma4");
}

TEST_CASE("estimate JSON has the documented fields", "[report]") {
  const std::vector<double> ones(5, 1.0);
  const json j = to_json(sequential_estimate(std::span<const double>(ones), 1, 2.0, 1.0));
  for (const char* key : {"p", "h", "sigma2", "tau", "theta_hat", "trace", "overshoot", "stopped"})
    CHECK(j.contains(key));
  CHECK(j["tau"] == 3);
  CHECK(j["p"] == 1);
}

TEST_CASE("limit spec JSON", "[report]") {
  const json j = to_json(limit_constants(ParamVector{1.0}, 1.0));
  CHECK(j["gamma"] == "Gamma2");
  CHECK(j["b"] == 1.0);
  CHECK(j["mu"].empty());
  CHECK(j["Q"] == json::array({json::array({1.0})}));
}

TEST_CASE("envelope carries schema and run block", "[report]") {
  const json e = envelope("check", {{"theta", {0.5}}}, json::object());
  CHECK(e["schema"] == kSchemaVersion);
  CHECK(e["run"]["version"] == std::string(version()));
  CHECK(e["run"]["config"]["theta"][0] == 0.5);
}

TEST_CASE("wall-clock only on request", "[report]") {
  ExperimentConfig cfg;
  cfg.theta = ParamVector{0.5};
  cfg.noise = NoiseSpec::gaussian(1.0);
  cfg.h = 50;
  cfg.replications = 5;
  const DistributionReport rep = normality_experiment(cfg);
  CHECK_FALSE(to_json(rep).contains("wall_clock_seconds"));
  CHECK(to_json(rep, true).contains("wall_clock_seconds"));
  const json q = to_json(rep)["residual_quantiles"][0];
  for (const char* key : {"q1", "q5", "q25", "q50", "q75", "q95", "q99"}) CHECK(q.contains(key));
}

TEST_CASE("doubles survive a JSON round trip", "[report]") {
  const double v = 0.1 + 0.2;
  const json j = to_json(Eigen::VectorXd(Eigen::VectorXd::Constant(1, v)));
  CHECK(json::parse(j.dump())[0].get<double>() == v);
}
