#include "cogload/config.hpp"

#include "cogload/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace cogload {

std::string trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  return std::string(text.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.push_back(trim(text.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

KeyValues parse_key_values(std::string_view text) {
  KeyValues kv;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    std::string_view line = text.substr(start, end == std::string_view::npos ? text.npos : end - start);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto stripped = trim(line);
    if (!stripped.empty()) {
      const auto eq = stripped.find('=');
      if (eq == std::string::npos) {
        throw Error(Errc::ParseError, "line " + std::to_string(line_no) + ": expected key = value");
      }
      auto key = trim(std::string_view(stripped).substr(0, eq));
      if (key.empty()) {
        throw Error(Errc::ParseError, "line " + std::to_string(line_no) + ": empty key");
      }
      kv[key] = trim(std::string_view(stripped).substr(eq + 1));
    }
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return kv;
}

KeyValues read_key_values(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_key_values(buffer.str());
}

std::string format_key_values(const KeyValues& values) {
  std::string out;
  for (const auto& [key, value] : values) out += key + " = " + value + "\n";
  return out;
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  const auto t = trim(text);
  if (t == "nan") return std::nan("");
  if (t == "inf") return HUGE_VAL;
  if (t == "-inf") return -HUGE_VAL;
  double value = 0.0;
  const auto* first = t.data();
  const auto* last = t.data() + t.size();
  if (!t.empty() && *first == '+') ++first;
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc() || res.ptr != last || t.empty()) {
    throw Error(Errc::ParseError, "'" + t + "' is not a number");
  }
  return value;
}

double kv_double(const KeyValues& kv, const std::string& key, double fallback) {
  const auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  try {
    return parse_double(it->second);
  } catch (const Error&) {
    throw Error(Errc::ParseError, "key '" + key + "': '" + it->second + "' is not a number");
  }
}

long long kv_int(const KeyValues& kv, const std::string& key, long long fallback) {
  const auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  long long value = 0;
  const auto& s = it->second;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw Error(Errc::ParseError, "key '" + key + "': '" + s + "' is not an integer");
  }
  return value;
}

std::string kv_string(const KeyValues& kv, const std::string& key, const std::string& fallback) {
  const auto it = kv.find(key);
  return it == kv.end() ? fallback : it->second;
}

std::vector<double> kv_doubles(const KeyValues& kv, const std::string& key) {
  std::vector<double> out;
  const auto it = kv.find(key);
  if (it == kv.end() || it->second.empty()) return out;
  for (const auto& part : split(it->second, ',')) {
    try {
      out.push_back(parse_double(part));
    } catch (const Error&) {
      throw Error(Errc::ParseError, "key '" + key + "': '" + part + "' is not a number");
    }
  }
  return out;
}

}  // namespace cogload
