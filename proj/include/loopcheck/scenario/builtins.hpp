#pragma once

#include <string>
#include <vector>

namespace loopcheck::scenario {

/// Names of the five built-in scenarios, in listing order.
const std::vector<std::string>& builtin_names();

/// Source text of a built-in scenario; throws Error for unknown names.
const std::string& builtin_source(const std::string& name);

bool is_builtin(const std::string& name);

}  // namespace loopcheck::scenario
