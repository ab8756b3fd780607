#pragma once

// JSON documents for experiment specs and reports. The schema is described
// in README.md.

#include <string>
#include <string_view>

#include "json.hpp"
#include "ssb/harness.hpp"
#include "ssb/theory.hpp"

namespace ssb {

/// Parses an environment object. `default_horizon` fills a lower-bound
/// environment's horizon when the object omits it.
EnvConfig env_from_json(const nlohmann::json& j, std::uint64_t default_horizon = 0);

PolicyConfig policy_from_json(const nlohmann::json& j);

/// Parses a full experiment spec. Throws ConfigError on any schema problem.
ExperimentSpec spec_from_json(const nlohmann::json& j);
ExperimentSpec spec_from_json_text(std::string_view text);

nlohmann::json to_json(const ExperimentResult& result);
nlohmann::json to_json(const LowerBoundInstance& instance);
nlohmann::json to_json(const GaussianFactReport& report);
nlohmann::json to_json(const LowerBoundRunReport& report);

/// Coefficient report for one algorithm: value at the published tuned
/// gamma, and the minimizer found over [1e-4, 100].
nlohmann::json coefficient_report(LowerBoundTarget algo);

}  // namespace ssb
