#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fragsim/errors.hpp"
#include "fragsim/sim_engine.hpp"
#include "fragsim/sweep.hpp"

namespace fragsim {

using ConfigDocument = std::variant<Scenario, SweepSpec>;

/// Parses the flat `key = value` format documented in README.md. The
/// document is a sweep as soon as it names any list-valued axis.
ConfigDocument parse_config(std::string_view text);
ConfigDocument parse_config_file(const std::filesystem::path& path);

}  // namespace fragsim
