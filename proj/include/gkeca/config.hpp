#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "gkeca/pipeline.hpp"

namespace gkeca {

/// Raw `key = value` settings. Later assignments of the same key win.
using Settings = std::map<std::string, std::string>;

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Every key understood by config files (and mirrored as CLI flags).
const std::vector<std::string>& config_keys();

/// Parses a flat key-value text: one `key = value` per line, `#` starts a
/// comment, blank lines ignored.
Settings parse_settings(const std::string& text, const std::string& origin = "<config>");
Settings load_settings(const std::filesystem::path& path);

/// Builds a validated config from defaults overlaid with `settings`.
PipelineConfig config_from_settings(const Settings& settings);

/// Inverse of config_from_settings for the pipeline-defining keys.
Settings settings_from_config(const PipelineConfig& config);

}  // namespace gkeca
