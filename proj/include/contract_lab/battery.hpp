#pragma once

#include <string>
#include <vector>

#include "contract_lab/contract.hpp"

namespace contract_lab {

struct BatteryScenario {
  std::string id;
  Scenario scenario;
};

/// Fixed scenario battery used by `verify` and the acceptance suite:
/// exponential pairs (wide, moderate, equal), the two-uniform welfare
/// counterexample, zero-cost-anchored exponentials and Weibulls across
/// shapes, and Weibull pairs above and below shape 1.
const std::vector<BatteryScenario>& builtin_battery();

}  // namespace contract_lab
