#pragma once

#include "continuized/config.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace continuized {

/// Named experiments reproducing the figure families as data tables.
std::vector<std::string> preset_names();
/// Throws ConfigError for an unknown name.
ExperimentSpec preset(std::string_view name);

}  // namespace continuized
