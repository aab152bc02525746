#include "ru/bench/bench.hpp"
#include "ru/isa/assembler.hpp"

namespace ru::bench {
namespace {

std::string llm_source(std::uint32_t agent, std::uint32_t queries) {
  std::string src = ".lits\nschema: echo(X).\n";
  for (std::uint32_t q = 0; q < queries; ++q) {
    src += "p" + std::to_string(q) + ": ask(a" + std::to_string(agent) + ", " + std::to_string(q) + ").\n";
  }
  src += ".code\n  LOADT B1, schema\n";
  for (std::uint32_t q = 0; q < queries; ++q) {
    src += "  LOADT B0, p" + std::to_string(q) + "\n  NEURAL B2, B0, B1\n  BELIEVE B2, 255\n";
  }
  return src + "  HALT\n";
}

}  // namespace

BenchResult bench_llm(const BenchSpec& spec) {
  const std::uint32_t agents = spec.agents.value_or(4);
  const std::uint32_t queries = spec.queries.value_or(8);
  MockNeuralConfig ncfg;
  ncfg.latency_min = spec.latency_min;
  ncfg.latency_max = std::max(spec.latency_min, spec.latency_max);
  ncfg.conformance_prob = spec.conformance;
  ncfg.seed = spec.seed;
  auto backend = std::make_shared<MockNeuralBackend>(ncfg);

  TermStore host;
  AgentSystem sys(host, spec.scheduler);
  for (std::uint32_t a = 0; a < agents; ++a) {
    AgentSpec as;
    as.program = std::make_shared<Program>(assemble(llm_source(a, queries)));
    as.context.neural = backend;
    as.machine = spec.machine;
    sys.spawn_agent(as);
  }
  const SystemMetrics sm = sys.run_system(UINT64_MAX);

  BenchResult res;
  MetricsReport& r = res.report;
  r.scenario = "llm";
  if (sm.outcome != SystemOutcome::Completed) {
    res.fault = true;
    res.problems.push_back(std::string("system: ") + to_string(sm.outcome));
  }
  std::uint64_t calls = 0;
  std::uint64_t conformant = 0;
  std::uint64_t neural_cycles = 0;
  std::uint64_t confidence_micros = 0;
  for (std::uint32_t i = 0; i < sys.size(); ++i) {
    const Machine& m = sys.machine(i);
    if (m.state().halt == HaltReason::Fault) {
      res.fault = true;
      res.problems.push_back("agent " + std::to_string(i) + ": " + m.state().fault);
    }
    accumulate_counters(r, m);
    calls += m.state().counters.neural_calls;
    conformant += m.state().counters.neural_conformant;
    neural_cycles += m.state().counters.neural_cycles;
    confidence_micros += m.state().counters.neural_confidence_micros;
  }
  r.cycles = sm.global_cycles;
  r.outcome = res.fault ? "fault" : "halted";
  r.finalize(spec.machine.energy_per_cycle, spec.machine.clock_hz);

  const double n = calls ? static_cast<double>(calls) : 1.0;
  auto& s = r.scenario_metrics;
  s["agents"] = agents;
  s["queries_per_agent"] = queries;
  s["neural_calls"] = calls;
  s["round_trip_cycles_mean"] = static_cast<double>(neural_cycles) / n;
  s["schema_conformance_rate"] = static_cast<double>(conformant) / n;
  s["mean_confidence"] = static_cast<double>(confidence_micros) / 1e6 / n;
  s["global_cycles"] = sm.global_cycles;
  s["idle_cycles"] = sm.idle_cycles;
  s["switch_overhead_cycles"] = sm.switch_overhead;
  res.oracle_ok = calls == static_cast<std::uint64_t>(agents) * queries;
  if (!res.oracle_ok) res.problems.push_back("expected one neural call per query");
  return res;
}

}  // namespace ru::bench
