#include "ru/machine/config.hpp"

namespace ru {

void MachineConfig::apply(const KeyValueConfig& cfg) {
  cfg.read("unify_floor", unify_floor);
  cfg.read("infer_cycles_per_step", infer_cycles_per_step);
  cfg.read("plan_floor", plan_floor);
  cfg.read("plan_cycles_per_expansion", plan_cycles_per_expansion);
  cfg.read("believe_base", believe_base);
  cfg.read("perceive_base", perceive_base);
  cfg.read("commit_base", commit_base);
  cfg.read("plumbing_cycles", plumbing_cycles);
  cfg.read("lanes", lanes);
  cfg.read("rollback_penalty", rollback_penalty);
  cfg.read("neural_trap_overhead", neural_trap_overhead);
  cfg.read("l1_latency", l1_latency);
  cfg.read("l2_latency", l2_latency);
  cfg.read("wm_latency", wm_latency);
  cfg.read("heap_latency", heap_latency);
  cfg.read("l1_lines", l1_lines);
  cfg.read("l1_ways", l1_ways);
  cfg.read("l2_lines", l2_lines);
  cfg.read("l2_ways", l2_ways);
  cfg.read("wm_cells", wm_cells);
  cfg.read("energy_per_cycle", energy_per_cycle);
  cfg.read("clock_hz", clock_hz);
  cfg.read("infer_max_steps", infer_max_steps);
  cfg.read("infer_max_depth", infer_max_depth);
  cfg.read("plan_max_expansions", plan_max_expansions);
  cfg.read("plan_goal_count", plan_goal_count);
  cfg.read("max_plans", max_plans);
  cfg.read("commit_fail_prob", commit_fail_prob);
  cfg.read("seed", seed);
  if (lanes == 0) throw ConfigError("lanes must be at least 1");
  if (l1_ways == 0 || l1_lines % l1_ways != 0) throw ConfigError("l1_lines must be a multiple of l1_ways");
  if (l2_ways == 0 || l2_lines % l2_ways != 0) throw ConfigError("l2_lines must be a multiple of l2_ways");
  if (commit_fail_prob < 0.0 || commit_fail_prob > 1.0) throw ConfigError("commit_fail_prob must lie in [0, 1]");
}

}  // namespace ru
