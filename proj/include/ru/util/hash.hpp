#pragma once

#include <cstdint>
#include <string_view>

namespace ru {

// 64-bit FNV-1a. Stable across platforms and runs; used for trace hashes
// and program fingerprints.
class Fnv1a {
public:
  void add_byte(std::uint8_t b) {
    state_ ^= b;
    state_ *= 0x100000001b3ULL;
  }

  void add_u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) add_byte(static_cast<std::uint8_t>(v >> (8 * i)));
  }

  void add(std::string_view s) {
    for (char c : s) add_byte(static_cast<std::uint8_t>(c));
    add_byte(0xff);
  }

  std::uint64_t value() const { return state_; }

  friend bool operator==(const Fnv1a&, const Fnv1a&) = default;

private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

inline std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

inline std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t v) {
  return mix64(seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2)));
}

}  // namespace ru
