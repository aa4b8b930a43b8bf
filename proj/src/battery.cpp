#include "contract_lab/battery.hpp"

namespace contract_lab {

const std::vector<BatteryScenario>& builtin_battery() {
  static const std::vector<BatteryScenario> battery = [] {
    std::vector<BatteryScenario> b;
    b.push_back({"uniform-mixture",
                 Scenario(1.0, 0.5, CostModel::uniform(0.5, 1.5), CostModel::uniform(0.0, 1.0))});
    b.push_back({"exp-wide-gap",
                 Scenario(1.0, 0.5, CostModel::exponential(0.5), CostModel::exponential(0.01))});
    b.push_back({"exp-moderate-gap",
                 Scenario(1.0, 0.5, CostModel::exponential(0.5), CostModel::exponential(0.25))});
    b.push_back({"exp-equal",
                 Scenario(1.0, 0.5, CostModel::exponential(0.5), CostModel::exponential(0.5))});
    b.push_back({"anchored-exp-0.1",
                 Scenario(1.0, 0.5, CostModel::exponential(0.1), CostModel::point_mass(0.0))});
    b.push_back({"anchored-exp-0.2",
                 Scenario(1.0, 0.5, CostModel::exponential(0.2), CostModel::point_mass(0.0))});
    b.push_back({"anchored-exp-0.5",
                 Scenario(1.0, 0.5, CostModel::exponential(0.5), CostModel::point_mass(0.0))});
    b.push_back({"anchored-exp-0.8",
                 Scenario(1.0, 0.5, CostModel::exponential(0.8), CostModel::point_mass(0.0))});
    b.push_back({"anchored-weibull-k0.4",
                 Scenario(1.0, 0.5, CostModel::weibull(0.5, 0.4), CostModel::point_mass(0.0))});
    b.push_back({"anchored-weibull-k1",
                 Scenario(1.0, 0.5, CostModel::weibull(0.5, 1.0), CostModel::point_mass(0.0))});
    b.push_back({"anchored-weibull-k2",
                 Scenario(1.0, 0.5, CostModel::weibull(0.5, 2.0), CostModel::point_mass(0.0))});
    b.push_back({"weibull-pair-k2",
                 Scenario(1.0, 0.5, CostModel::weibull(0.8, 2.0), CostModel::weibull(0.3, 2.0))});
    b.push_back({"weibull-pair-sub1",
                 Scenario(1.0, 0.5, CostModel::weibull(0.9, 0.8), CostModel::weibull(0.2, 0.6))});
    return b;
  }();
  return battery;
}

}  // namespace contract_lab
