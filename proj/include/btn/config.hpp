#ifndef BTN_CONFIG_HPP
#define BTN_CONFIG_HPP

#include <filesystem>
#include <string>
#include <string_view>

#include "btn/dynamics.hpp"

namespace btn {

/// Parse the line-oriented `key = value` format ('#' starts a comment).
/// Unknown or duplicate keys are rejected with the offending line number;
/// missing keys take the documented defaults. The result is validated.
SimulationConfig parse_config(std::string_view text);

/// Emit a config that reparses to an equal SimulationConfig.
std::string serialize_config(const SimulationConfig& cfg);

SimulationConfig load_config_file(const std::filesystem::path& path);

} // namespace btn

#endif
