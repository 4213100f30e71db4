#pragma once

// Minimal TOML reader covering the subset used by study config files:
// [table] and [[array-of-tables]] headers, bare or quoted keys, and values
// that are strings, booleans, numbers, or single-line arrays of those.
// Produces the same tree shape the JSON loader consumes.

#include <string>

#include <nlohmann/json.hpp>

namespace hord::detail {

nlohmann::json parse_toml_lite(const std::string& text);

}  // namespace hord::detail
