#include "ru/machine/cache.hpp"

#include "ru/util/hash.hpp"

namespace ru {

const char* to_string(MemLevel l) {
  switch (l) {
    case MemLevel::None: return "none";
    case MemLevel::L1: return "l1";
    case MemLevel::L2: return "l2";
    case MemLevel::WorkingMemory: return "wm";
    case MemLevel::Heap: return "heap";
  }
  return "?";
}

CacheModel::CacheModel(const MachineConfig& cfg)
    : latency_{0, cfg.l1_latency, cfg.l2_latency, cfg.wm_latency, cfg.heap_latency},
      l1_(make(cfg.l1_lines, cfg.l1_ways)),
      l2_(make(cfg.l2_lines, cfg.l2_ways)),
      wm_capacity_(cfg.wm_cells) {}

CacheModel::SetAssoc CacheModel::make(std::uint32_t lines, std::uint32_t ways) {
  SetAssoc c;
  c.ways = ways;
  c.sets.resize(lines / ways);
  return c;
}

bool CacheModel::probe(SetAssoc& c, std::size_t set, std::uint32_t tag) {
  for (Line& l : c.sets[set]) {
    if (l.tag == tag) {
      l.stamp = tick_;
      return true;
    }
  }
  return false;
}

void CacheModel::fill(SetAssoc& c, std::size_t set, std::uint32_t tag) {
  auto& lines = c.sets[set];
  if (lines.size() < c.ways) {
    lines.push_back(Line{tag, tick_});
    return;
  }
  Line* victim = &lines[0];
  for (Line& l : lines) {
    if (l.stamp < victim->stamp) victim = &l;
  }
  *victim = Line{tag, tick_};
}

bool CacheModel::probe_wm(std::uint32_t tag) {
  auto it = wm_stamp_.find(tag);
  if (it == wm_stamp_.end()) return false;
  wm_lru_.erase({it->second, tag});
  it->second = tick_;
  wm_lru_.insert({tick_, tag});
  return true;
}

void CacheModel::fill_wm(std::uint32_t tag) {
  if (wm_capacity_ == 0) return;
  if (wm_stamp_.size() >= wm_capacity_) {
    auto oldest = wm_lru_.begin();
    wm_stamp_.erase(oldest->second);
    wm_lru_.erase(oldest);
  }
  wm_stamp_.emplace(tag, tick_);
  wm_lru_.insert({tick_, tag});
}

MemAccess CacheModel::access(std::uint32_t cell, std::uint64_t shape_hash) {
  ++tick_;
  const std::size_t s1 = shape_hash % l1_.sets.size();
  const std::size_t s2 = mix64(cell) % l2_.sets.size();
  MemLevel level = MemLevel::Heap;
  if (probe(l1_, s1, cell)) {
    ++stats_.l1_hits;
    level = MemLevel::L1;
  } else {
    ++stats_.l1_misses;
    if (probe(l2_, s2, cell)) {
      ++stats_.l2_hits;
      level = MemLevel::L2;
    } else {
      ++stats_.l2_misses;
      if (probe_wm(cell)) {
        ++stats_.wm_hits;
        level = MemLevel::WorkingMemory;
      } else {
        ++stats_.wm_misses;
        ++stats_.heap_accesses;
        fill_wm(cell);
      }
      fill(l2_, s2, cell);
    }
    fill(l1_, s1, cell);
  }
  return MemAccess{static_cast<std::uint32_t>(latency_[static_cast<int>(level)]), level};
}

}  // namespace ru
