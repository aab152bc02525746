#pragma once

#include <cstdint>

#include "ru/planner/search.hpp"
#include "ru/util/config.hpp"

namespace ru {

// Timing, memory and engine parameters for one machine. Every field can be
// overridden from a key=value file; keys match the field names.
struct MachineConfig {
  // Reason-stage costs.
  std::uint64_t unify_floor = 10;
  std::uint64_t infer_cycles_per_step = 10;
  std::uint64_t plan_floor = 100;
  std::uint64_t plan_cycles_per_expansion = 10;
  std::uint64_t believe_base = 5;
  std::uint64_t perceive_base = 5;
  std::uint64_t commit_base = 5;
  std::uint64_t plumbing_cycles = 1;
  std::uint64_t lanes = 1;
  std::uint64_t rollback_penalty = 5;
  std::uint64_t neural_trap_overhead = 200;

  // Memory hierarchy.
  std::uint64_t l1_latency = 1;
  std::uint64_t l2_latency = 10;
  std::uint64_t wm_latency = 50;
  std::uint64_t heap_latency = 100;
  std::uint32_t l1_lines = 1024;
  std::uint32_t l1_ways = 4;
  std::uint32_t l2_lines = 8192;
  std::uint32_t l2_ways = 8;
  std::uint64_t wm_cells = 131072;

  double energy_per_cycle = 7.5e-9;
  double clock_hz = 2.0e9;

  // Engines.
  std::uint64_t infer_max_steps = 1'000'000;
  std::uint32_t infer_max_depth = 10'000;
  std::uint64_t plan_max_expansions = 200'000;
  bool plan_goal_count = false;
  // PLAN executions allowed per run; 0 means unlimited.
  std::uint64_t max_plans = 0;
  double commit_fail_prob = 0.0;

  std::uint64_t seed = 0;

  PlanConfig plan_config() const {
    return PlanConfig{plan_goal_count ? Heuristic::GoalCount : Heuristic::HMax, plan_max_expansions};
  }

  void apply(const KeyValueConfig& cfg);
};

}  // namespace ru
