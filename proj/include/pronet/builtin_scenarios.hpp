#pragma once

#include <string>
#include <vector>

namespace pronet {

// JSON text of a bundled reproduction scenario; throws on unknown id.
std::string builtin_scenario(const std::string& figureId);

std::vector<std::string> builtin_scenario_ids();

}  // namespace pronet
