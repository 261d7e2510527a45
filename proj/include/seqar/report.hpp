#ifndef SEQAR_REPORT_HPP
#define SEQAR_REPORT_HPP

#include <string>

#include <json.hpp>

#include "seqar/conditions.hpp"
#include "seqar/estimator.hpp"
#include "seqar/experiments.hpp"
#include "seqar/limits.hpp"

namespace seqar {

inline constexpr int kSchemaVersion = 1;

/// Library version string, e.g. "0.1.0".
const char* version();

nlohmann::json to_json(const Eigen::MatrixXd& m);
nlohmann::json to_json(const Eigen::VectorXd& v);
nlohmann::json to_json(const RootSet& roots);
/// {class, phi}
nlohmann::json to_json(const RegionClass& region);
nlohmann::json to_json(const ConditionReport& report);
nlohmann::json to_json(const LimitSpec& spec);
/// {p, h, sigma2, tau, theta_hat, trace, overshoot, stopped}
nlohmann::json to_json(const SequentialResult& result);
/// Wall-clock time is only written when `timing` is set, so that reports
/// are byte-identical across runs by default.
nlohmann::json to_json(const DistributionReport& report, bool timing = false);
nlohmann::json to_json(const FisherRatioReport& report, bool timing = false);

/// {"schema": 1, "command": ..., "run": {"version": ..., "config": ...},
///  "result": ...}
nlohmann::json envelope(const std::string& command, nlohmann::json config,
                        nlohmann::json result);

}  // namespace seqar

#endif  // SEQAR_REPORT_HPP
