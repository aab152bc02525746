#include "ru/machine/metrics.hpp"

namespace ru {

void MetricsReport::finalize(double energy_per_cycle, double clock_hz) {
  energy_joules = static_cast<double>(cycles) * energy_per_cycle;
  const double seconds = static_cast<double>(cycles) / clock_hz;
  inferences_per_simulated_second = cycles == 0 ? 0.0 : static_cast<double>(inferences) / seconds;
}

nlohmann::ordered_json to_json(const MetricsReport& r) {
  nlohmann::ordered_json j;
  j["scenario"] = r.scenario;
  j["outcome"] = r.outcome;
  j["cycles"] = r.cycles;
  j["energy_joules"] = r.energy_joules;
  j["retired"] = r.retired;
  j["inferences"] = r.inferences;
  j["unifications"] = r.unifications;
  j["inferences_per_simulated_second"] = r.inferences_per_simulated_second;
  j["cache"] = {
      {"l1_hits", r.cache.l1_hits},   {"l1_misses", r.cache.l1_misses}, {"l2_hits", r.cache.l2_hits},
      {"l2_misses", r.cache.l2_misses}, {"wm_hits", r.cache.wm_hits},   {"wm_misses", r.cache.wm_misses},
      {"heap_accesses", r.cache.heap_accesses},
  };
  j["speculation"] = {
      {"predictions", r.speculation.predictions},
      {"mispredictions", r.speculation.mispredictions},
      {"rollbacks", r.speculation.rollbacks},
  };
  j["opcode_counts"] = nlohmann::ordered_json::object();
  for (const auto& [op, n] : r.opcode_counts) j["opcode_counts"][op] = n;
  j["scenario_metrics"] = r.scenario_metrics;
  j["wall_clock_seconds"] = r.wall_clock_seconds;
  return j;
}

MetricsReport metrics_from_json(const nlohmann::ordered_json& j) {
  MetricsReport r;
  r.scenario = j.at("scenario").get<std::string>();
  r.outcome = j.at("outcome").get<std::string>();
  r.cycles = j.at("cycles").get<std::uint64_t>();
  r.energy_joules = j.at("energy_joules").get<double>();
  r.retired = j.at("retired").get<std::uint64_t>();
  r.inferences = j.at("inferences").get<std::uint64_t>();
  r.unifications = j.at("unifications").get<std::uint64_t>();
  r.inferences_per_simulated_second = j.at("inferences_per_simulated_second").get<double>();
  const auto& c = j.at("cache");
  r.cache.l1_hits = c.at("l1_hits").get<std::uint64_t>();
  r.cache.l1_misses = c.at("l1_misses").get<std::uint64_t>();
  r.cache.l2_hits = c.at("l2_hits").get<std::uint64_t>();
  r.cache.l2_misses = c.at("l2_misses").get<std::uint64_t>();
  r.cache.wm_hits = c.at("wm_hits").get<std::uint64_t>();
  r.cache.wm_misses = c.at("wm_misses").get<std::uint64_t>();
  r.cache.heap_accesses = c.at("heap_accesses").get<std::uint64_t>();
  const auto& s = j.at("speculation");
  r.speculation.predictions = s.at("predictions").get<std::uint64_t>();
  r.speculation.mispredictions = s.at("mispredictions").get<std::uint64_t>();
  r.speculation.rollbacks = s.at("rollbacks").get<std::uint64_t>();
  for (const auto& [op, n] : j.at("opcode_counts").items()) r.opcode_counts[op] = n.get<std::uint64_t>();
  r.scenario_metrics = j.at("scenario_metrics");
  r.wall_clock_seconds = j.at("wall_clock_seconds").get<double>();
  return r;
}

}  // namespace ru
