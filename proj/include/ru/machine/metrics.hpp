#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "json.hpp"
#include "ru/machine/cache.hpp"

namespace ru {

struct SpeculationStats {
  std::uint64_t predictions = 0;
  std::uint64_t mispredictions = 0;
  std::uint64_t rollbacks = 0;

  double misprediction_rate() const {
    return predictions == 0 ? 0.0 : static_cast<double>(mispredictions) / static_cast<double>(predictions);
  }
  friend bool operator==(const SpeculationStats&, const SpeculationStats&) = default;
};

// The harness output contract. `scenario_metrics` holds the per-benchmark
// block; everything else is common to every report.
struct MetricsReport {
  std::string scenario = "run";
  std::string outcome;
  std::uint64_t cycles = 0;
  double energy_joules = 0.0;
  std::uint64_t retired = 0;
  std::uint64_t inferences = 0;
  std::uint64_t unifications = 0;
  double inferences_per_simulated_second = 0.0;
  CacheStats cache;
  SpeculationStats speculation;
  std::map<std::string, std::uint64_t> opcode_counts;
  nlohmann::ordered_json scenario_metrics = nlohmann::ordered_json::object();
  double wall_clock_seconds = 0.0;

  // Fills energy and inferences-per-second from cycles.
  void finalize(double energy_per_cycle, double clock_hz);
};

nlohmann::ordered_json to_json(const MetricsReport& r);
// Throws nlohmann::json::exception on missing or mistyped fields.
MetricsReport metrics_from_json(const nlohmann::ordered_json& j);

}  // namespace ru
