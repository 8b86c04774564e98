#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "optocorr/core.hpp"

namespace optocorr {

/// Flat key -> value view of a parameter file, in config units
/// (frequencies as omega/2pi in MHz or Hz, detunings as ratios to omega_m).
/// Drive keys live under the "drive." prefix.
using ConfigValues = std::map<std::string, double, std::less<>>;

/// Keys every parameter file must define.
const std::vector<std::string_view>& required_keys();

/// Optional keys of the "drive" section, without the prefix.
const std::vector<std::string_view>& drive_keys();

/// Reference operating point expressed in config keys.
ConfigValues reference_config();

/// Parses a JSON document. Unknown or missing keys, and non-numeric
/// values, raise ConfigError naming the key.
ConfigValues parse_config(std::string_view json_text);

/// Reads and parses a file; IoError if it cannot be read.
ConfigValues load_config(const std::filesystem::path& path);

/// Applies one "key=value" override. Throws ConfigError for an unknown key
/// or malformed value.
void apply_override(ConfigValues& values, std::string_view assignment);

/// Converts to validated internal parameters (ParameterError on
/// violations).
SystemParams to_system_params(const ConfigValues& values);

/// Builds the drive description from drive.* keys; nullopt if none given.
std::optional<RawDriveParams> to_drive_params(const ConfigValues& values);

}  // namespace optocorr
