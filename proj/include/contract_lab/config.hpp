#pragma once

#include <optional>
#include <string>
#include <vector>

#include "contract_lab/contract.hpp"
#include "contract_lab/distributions.hpp"

namespace contract_lab {

struct GridConfig {
  std::optional<int> eps_n;
  std::optional<int> r_n;
  std::optional<std::vector<double>> lambda0;
  std::optional<std::vector<double>> lambda1;
};

struct OutputConfig {
  std::string format = "json";  // csv | json
  std::optional<std::string> path;
};

/// Scenario configuration file. JSON, unknown fields rejected at every level.
/// Lambda axes accept either an explicit array or {"min":..,"max":..,"n":..}.
struct ScenarioConfig {
  double b = 0.0;
  double theta = 0.0;
  DistributionSpec f0 = ExponentialSpec{1.0};
  DistributionSpec f1 = ExponentialSpec{1.0};
  std::optional<double> gamma;  // defaults to 0.5 when absent
  std::optional<GridConfig> grids;
  std::optional<num::Tolerance> tolerances;
  std::optional<OutputConfig> output;

  double effective_gamma() const { return gamma.value_or(0.5); }
  num::Tolerance effective_tolerance() const { return tolerances.value_or(num::Tolerance{}); }
  int eps_n() const;  // default 101
  int r_n() const;    // default 101
};

bool config_equal(const ScenarioConfig& a, const ScenarioConfig& b);

/// Parses and validates; throws ConfigError with a field-naming message.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);

/// Canonical JSON serialization; parse(serialize(parse(text))) is
/// field-by-field identical to parse(text).
std::string serialize_config(const ScenarioConfig& cfg);

Scenario make_scenario(const ScenarioConfig& cfg);

}  // namespace contract_lab
