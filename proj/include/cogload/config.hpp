#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace cogload {

// Flat "key = value" text format used for run configs and synthetic-fixture
// specs. '#' starts a comment; blank lines are ignored; later keys win.
using KeyValues = std::map<std::string, std::string>;

KeyValues parse_key_values(std::string_view text);
KeyValues read_key_values(const std::filesystem::path& path);
std::string format_key_values(const KeyValues& values);

// Typed accessors; throw ParseError naming the key on malformed values.
double kv_double(const KeyValues& kv, const std::string& key, double fallback);
long long kv_int(const KeyValues& kv, const std::string& key, long long fallback);
std::string kv_string(const KeyValues& kv, const std::string& key, const std::string& fallback);
std::vector<double> kv_doubles(const KeyValues& kv, const std::string& key);
std::vector<std::string> split(std::string_view text, char sep);
std::string trim(std::string_view text);

// Shortest decimal text that parses back to the same double.
std::string format_double(double value);
double parse_double(std::string_view text);

}  // namespace cogload
