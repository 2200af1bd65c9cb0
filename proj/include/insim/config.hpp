#pragma once

#include "insim/mission.hpp"

#include <string>

namespace insim {

/// Parses a mission config document. Missing keys take defaults; unknown keys
/// are rejected at every level.
MissionConfig parse_config(const std::string& json_text);
MissionConfig load_config(const std::string& path);

std::string serialize_config(const MissionConfig& config);
void save_config(const MissionConfig& config, const std::string& path);

}  // namespace insim
