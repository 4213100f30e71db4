#pragma once

#include <filesystem>
#include <string>

#include "hord/study.hpp"

namespace hord {

// Loads a study description from a TOML or JSON file (picked by extension,
// .json means JSON, anything else is parsed as TOML). The two formats carry
// the same structure; see the README for the schema and the supported TOML
// subset. ConfigInvalid on parse or validation failure.
StudyConfig load_study_config(const std::filesystem::path& path);

// Same, from in-memory text.
StudyConfig study_config_from_json(const std::string& text);
StudyConfig study_config_from_toml(const std::string& text);

}  // namespace hord
