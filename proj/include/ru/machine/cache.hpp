#pragma once

#include <cstdint>
#include <set>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ru/machine/config.hpp"

namespace ru {

enum class MemLevel : std::uint8_t { None = 0, L1 = 1, L2 = 2, WorkingMemory = 3, Heap = 4 };

const char* to_string(MemLevel l);

struct CacheStats {
  std::uint64_t l1_hits = 0;
  std::uint64_t l1_misses = 0;
  std::uint64_t l2_hits = 0;
  std::uint64_t l2_misses = 0;
  std::uint64_t wm_hits = 0;
  std::uint64_t wm_misses = 0;
  std::uint64_t heap_accesses = 0;

  std::uint64_t accesses() const { return l1_hits + l1_misses; }
  friend bool operator==(const CacheStats&, const CacheStats&) = default;
};

struct MemAccess {
  std::uint32_t cycles = 0;
  MemLevel level = MemLevel::None;
};

// L1 (set-associative, set chosen by the term's functor/arity hash), L2
// (set-associative by handle), a fully associative working-memory region
// and an unbounded heap. One term cell per line, LRU everywhere. A miss
// fills every level above the one that hit.
class CacheModel {
public:
  explicit CacheModel(const MachineConfig& cfg = {});

  // `cell` identifies the line; `shape_hash` picks the L1 set.
  MemAccess access(std::uint32_t cell, std::uint64_t shape_hash);

  const CacheStats& stats() const { return stats_; }
  std::uint32_t l1_sets() const { return static_cast<std::uint32_t>(l1_.sets.size()); }

  friend bool operator==(const CacheModel&, const CacheModel&) = default;

private:
  struct Line {
    std::uint32_t tag;
    std::uint64_t stamp;
    friend bool operator==(const Line&, const Line&) = default;
  };
  struct SetAssoc {
    std::vector<std::vector<Line>> sets;
    std::uint32_t ways = 1;
    friend bool operator==(const SetAssoc&, const SetAssoc&) = default;
  };

  static SetAssoc make(std::uint32_t lines, std::uint32_t ways);
  bool probe(SetAssoc& c, std::size_t set, std::uint32_t tag);
  void fill(SetAssoc& c, std::size_t set, std::uint32_t tag);
  bool probe_wm(std::uint32_t tag);
  void fill_wm(std::uint32_t tag);

  std::uint64_t latency_[5] = {0, 1, 10, 50, 100};
  SetAssoc l1_;
  SetAssoc l2_;
  std::uint64_t wm_capacity_;
  std::unordered_map<std::uint32_t, std::uint64_t> wm_stamp_;
  std::set<std::pair<std::uint64_t, std::uint32_t>> wm_lru_;
  std::uint64_t tick_ = 0;
  CacheStats stats_;
};

}  // namespace ru
