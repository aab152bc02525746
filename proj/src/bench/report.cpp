#include <chrono>
#include <stdexcept>

#include "ru/bench/bench.hpp"

namespace ru::bench {

void accumulate_counters(MetricsReport& into, const Machine& m) {
  const MachineState& st = m.state();
  into.retired += st.counters.retired;
  into.inferences += st.counters.inferences;
  into.unifications += st.counters.unifications;
  const CacheStats& c = st.cache.stats();
  into.cache.l1_hits += c.l1_hits;
  into.cache.l1_misses += c.l1_misses;
  into.cache.l2_hits += c.l2_hits;
  into.cache.l2_misses += c.l2_misses;
  into.cache.wm_hits += c.wm_hits;
  into.cache.wm_misses += c.wm_misses;
  into.cache.heap_accesses += c.heap_accesses;
  into.speculation.predictions += st.speculation.predictions;
  into.speculation.mispredictions += st.speculation.mispredictions;
  into.speculation.rollbacks += st.speculation.rollbacks;
  for (Opcode op : kAllOpcodes) {
    const auto n = st.counters.opcode_counts[static_cast<std::uint8_t>(op)];
    if (n > 0) into.opcode_counts[std::string(mnemonic(op))] += n;
  }
}

void accumulate(MetricsReport& into, const Machine& m) {
  accumulate_counters(into, m);
  into.cycles += m.state().cycle;
}

std::string report_text(const MetricsReport& r, bool include_wall_clock) {
  auto j = to_json(r);
  if (!include_wall_clock) j["wall_clock_seconds"] = 0.0;
  return j.dump(2) + "\n";
}

namespace {

BenchResult dispatch(const BenchSpec& spec) {
  if (spec.scenario == "kg-nav") return bench_kg_nav(spec);
  if (spec.scenario == "diagnose") return bench_diagnose(spec);
  if (spec.scenario == "robotics") return bench_robotics(spec);
  if (spec.scenario == "negotiate") return bench_negotiate(spec);
  if (spec.scenario == "llm") return bench_llm(spec);
  throw std::invalid_argument("unknown scenario '" + spec.scenario + "'");
}

}  // namespace

BenchResult run_bench(const BenchSpec& spec) {
  const auto t0 = std::chrono::steady_clock::now();
  BenchResult r = dispatch(spec);
  r.report.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace ru::bench
