#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "qpe/experiment/config.hpp"
#include "qpe/experiment/table.hpp"

namespace qpe::experiment {

// Subcommands that produce tables (validate is handled by validate_config).
const std::vector<std::string>& subcommands();

// Validates the config, then dispatches. Throws Error(Config) for an invalid
// config or unknown subcommand.
Result run(const ExperimentConfig& cfg, std::string_view subcommand);

}  // namespace qpe::experiment
