#include "ru/util/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace ru {
namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(std::string_view text) {
  KeyValueConfig cfg;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    auto key = trim(line.substr(0, eq));
    auto value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    cfg.set(std::string(key), std::string(value));
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

void KeyValueConfig::set(std::string key, std::string value) { values_[std::move(key)] = std::move(value); }

bool KeyValueConfig::contains(std::string_view key) const { return values_.find(key) != values_.end(); }

std::optional<std::string> KeyValueConfig::get_string(std::string_view key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  used_.insert(std::string(key));
  return it->second;
}

std::optional<std::int64_t> KeyValueConfig::get_int(std::string_view key) const {
  auto s = get_string(key);
  if (!s) return std::nullopt;
  std::int64_t v{};
  auto [ptr, ec] = std::from_chars(s->data(), s->data() + s->size(), v);
  if (ec != std::errc{} || ptr != s->data() + s->size()) {
    throw ConfigError("config key '" + std::string(key) + "': expected integer, got '" + *s + "'");
  }
  return v;
}

std::optional<std::uint64_t> KeyValueConfig::get_uint(std::string_view key) const {
  auto s = get_string(key);
  if (!s) return std::nullopt;
  std::uint64_t v{};
  auto [ptr, ec] = std::from_chars(s->data(), s->data() + s->size(), v);
  if (ec != std::errc{} || ptr != s->data() + s->size()) {
    throw ConfigError("config key '" + std::string(key) + "': expected unsigned integer, got '" + *s + "'");
  }
  return v;
}

std::optional<double> KeyValueConfig::get_double(std::string_view key) const {
  auto s = get_string(key);
  if (!s) return std::nullopt;
  try {
    std::size_t pos = 0;
    double v = std::stod(*s, &pos);
    if (pos != s->size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + std::string(key) + "': expected number, got '" + *s + "'");
  }
}

std::set<std::string> KeyValueConfig::unused_keys() const {
  std::set<std::string> out;
  for (const auto& [k, v] : values_) {
    if (!used_.contains(k)) out.insert(k);
  }
  return out;
}

}  // namespace ru
