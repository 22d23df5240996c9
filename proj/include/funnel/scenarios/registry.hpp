#pragma once

#include <string>
#include <vector>

#include "funnel/scenarios/config.hpp"

namespace funnel::scenarios {

struct ScenarioInfo {
    std::string id;
    std::string description;
    Json defaults;
};

/// Every runnable scenario, in a fixed order.
const std::vector<ScenarioInfo>& registry();

/// Throws ConfigError listing the registered ids when `id` is unknown.
const ScenarioInfo& find_scenario(const std::string& id);

}  // namespace funnel::scenarios
