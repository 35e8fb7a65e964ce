#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

namespace lab {

// The subset of TOML used by run configs: [table] and [a.b] headers,
// key = value lines with bare or dotted keys, basic and literal strings,
// integers, floats, booleans and single-line arrays. Comments start with '#'.
// The result is a nested object; integers stay integers.
//
// Throws backflow::ConfigError naming the line on malformed input or a
// repeated key.
nlohmann::ordered_json parse_toml(std::string_view text);

nlohmann::ordered_json parse_toml_file(const std::string& path);

}  // namespace lab
