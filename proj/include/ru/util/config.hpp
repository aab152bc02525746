#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>

namespace ru {

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Flat `key = value` configuration. `#` starts a comment. Consumers pull
// typed values out by key; keys nobody asked for are reported by
// unused_keys() so typos surface instead of silently doing nothing.
class KeyValueConfig {
public:
  static KeyValueConfig parse(std::string_view text);
  static KeyValueConfig load(const std::string& path);

  void set(std::string key, std::string value);
  bool contains(std::string_view key) const;

  std::optional<std::string> get_string(std::string_view key) const;
  std::optional<std::int64_t> get_int(std::string_view key) const;
  std::optional<std::uint64_t> get_uint(std::string_view key) const;
  std::optional<double> get_double(std::string_view key) const;

  // Overwrite `out` when the key is present.
  template <typename T>
  void read(std::string_view key, T& out) const;

  std::set<std::string> unused_keys() const;
  const std::map<std::string, std::string, std::less<>>& entries() const { return values_; }

private:
  std::map<std::string, std::string, std::less<>> values_;
  mutable std::set<std::string, std::less<>> used_;
};

template <typename T>
void KeyValueConfig::read(std::string_view key, T& out) const {
  if constexpr (std::is_same_v<T, double>) {
    if (auto v = get_double(key)) out = *v;
  } else if constexpr (std::is_same_v<T, std::string>) {
    if (auto v = get_string(key)) out = *v;
  } else if constexpr (std::is_signed_v<T>) {
    if (auto v = get_int(key)) out = static_cast<T>(*v);
  } else {
    if (auto v = get_uint(key)) out = static_cast<T>(*v);
  }
}

}  // namespace ru
