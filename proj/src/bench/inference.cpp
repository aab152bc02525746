#include <algorithm>
#include <set>

#include "ru/bench/bench.hpp"
#include "ru/isa/assembler.hpp"
#include "ru/knowledge/forward.hpp"
#include "ru/knowledge/loader.hpp"
#include "ru/oracle/naive.hpp"

namespace ru::bench {

DiagnosisInstance gen_diagnosis(Rng& rng, std::uint32_t nodes) {
  nodes = std::max<std::uint32_t>(nodes, 4);
  const std::uint32_t roots = std::max<std::uint32_t>(2, nodes / 10);
  std::vector<std::vector<std::uint32_t>> parents(nodes);
  std::string kb;
  for (std::uint32_t j = roots; j < nodes; ++j) {
    std::set<std::uint32_t> ps{static_cast<std::uint32_t>(rng.below(j))};
    // Occasional second parent; kept rare so the number of causal paths
    // stays polynomial in practice.
    if (rng.below(5) == 0) ps.insert(static_cast<std::uint32_t>(rng.below(j)));
    parents[j].assign(ps.begin(), ps.end());
  }
  auto name = [](std::uint32_t i) { return "x" + std::to_string(i); };
  for (std::uint32_t j = 0; j < nodes; ++j) {
    for (std::uint32_t p : parents[j]) kb += "causes(" + name(p) + ", " + name(j) + ").\n";
  }
  for (std::uint32_t r = 0; r < roots; ++r) kb += "root(" + name(r) + ").\n";

  // Observe a fault among the non-root nodes and find its upstream roots.
  const std::uint32_t observed = roots + static_cast<std::uint32_t>(rng.below(nodes - roots));
  std::vector<char> upstream(nodes, 0);
  std::vector<std::uint32_t> stack{observed};
  while (!stack.empty()) {
    const std::uint32_t n = stack.back();
    stack.pop_back();
    for (std::uint32_t p : parents[n]) {
      if (!upstream[p]) {
        upstream[p] = 1;
        stack.push_back(p);
      }
    }
  }
  std::vector<std::uint32_t> candidates;
  std::vector<std::uint32_t> decoys;
  for (std::uint32_t r = 0; r < roots; ++r) (upstream[r] ? candidates : decoys).push_back(r);
  const std::uint32_t planted = candidates[rng.below(candidates.size())];
  kb += "active(" + name(planted) + ").\n";
  // Decoys are active too but cannot explain the observation.
  for (std::uint32_t d : decoys) {
    if (rng.below(2) == 0) kb += "active(" + name(d) + ").\n";
  }
  kb += "upstream(R, F) :- causes(R, F).\n";
  kb += "upstream(R, F) :- causes(R, Z), upstream(Z, F).\n";
  kb += "explain(R, F) :- root(R), active(R), upstream(R, F).\n";
  return DiagnosisInstance{kb, name(observed), name(planted), nodes};
}

BenchResult bench_diagnose(const BenchSpec& spec) {
  const std::uint32_t nodes = spec.nodes.value_or(60);
  const std::uint32_t episodes = spec.episodes.value_or(20);
  Rng rng(spec.seed);
  const std::string code =
      ".code\n"
      "  LOADT B0, q\n"
      "  INFER B1, B0\n"
      "loop:\n"
      "  BRS found\n"
      "  HALT\n"
      "found:\n"
      "  BELIEVE B1, 255\n"
      "  NEXT B1\n"
      "  JMP loop\n";

  BenchResult res;
  MetricsReport& r = res.report;
  r.scenario = "diagnose";
  std::uint64_t recovered = 0;
  std::uint64_t forward_ok = 0;
  auto per_episode = nlohmann::ordered_json::array();
  for (std::uint32_t e = 0; e < episodes; ++e) {
    const DiagnosisInstance inst = gen_diagnosis(rng, nodes);
    TermStore host;
    auto kb = std::make_shared<KnowledgeBase>();
    load_kb(host, *kb, inst.kb);
    const auto program =
        std::make_shared<Program>(assemble(".lits\nq: explain(R, " + inst.observed + ").\n" + code));
    MachineContext ctx;
    ctx.kb = kb;
    Machine m(host, program, ctx, spec.machine);
    std::uint64_t first = 0;
    std::uint64_t exhausted = 0;
    m.set_trace_sink([&](const TraceEvent& ev) {
      if (ev.stage != Stage::Writeback) return;
      if (ev.opcode == Opcode::Infer && (ev.flags & 1)) first = ev.cycle;
      if ((ev.opcode == Opcode::Infer || ev.opcode == Opcode::Next) && !(ev.flags & 1)) exhausted = ev.cycle;
    });
    const RunOutcome outcome = m.run(UINT64_MAX);
    if (outcome != RunOutcome::Halted) {
      res.fault = true;
      res.problems.push_back("episode " + std::to_string(e) + ": " + m.state().fault);
    }
    accumulate(r, m);

    MachineState& st = m.state();
    std::set<std::string> roots;
    for (const auto& [b, bind] : st.beliefs.query(st.store, st.store.compound("explain", {st.store.variable("R"),
                                                                                            st.store.atom(inst.observed)}))) {
      roots.insert(st.store.to_string(st.store.arg(b.content, 0)));
    }
    const bool hit = roots == std::set<std::string>{inst.planted_root};
    recovered += hit;

    // Forward fixpoint against the naive oracle.
    const ForwardResult fr = solve_forward(host, *kb);
    const std::set<std::string> naive = oracle::naive_fixpoint(oracle::clauses_of(host, *kb));
    std::set<std::string> semi;
    for (const Clause* c : kb->clauses()) {
      if (c->is_fact()) semi.insert(oracle::to_tree(host, c->head).text());
    }
    for (Term d : fr.derived) semi.insert(oracle::to_tree(host, d).text());
    const bool fok = fr.status == ForwardStatus::Fixpoint && semi == naive;
    forward_ok += fok;
    if (!fok) res.problems.push_back("episode " + std::to_string(e) + ": forward fixpoint differs from naive oracle");

    per_episode.push_back({{"observed", inst.observed},
                           {"planted_root", inst.planted_root},
                           {"recovered", hit},
                           {"backward_first_solution_cycles", first},
                           {"backward_exhaustion_cycles", exhausted},
                           {"backward_steps", st.counters.inferences},
                           {"forward_facts", semi.size()},
                           {"forward_firings", fr.steps},
                           {"forward_cycles", fr.steps * spec.machine.infer_cycles_per_step},
                           {"forward_matches_oracle", fok}});
  }
  res.oracle_ok = forward_ok == episodes && recovered == episodes;
  r.outcome = res.fault ? "fault" : "halted";
  r.finalize(spec.machine.energy_per_cycle, spec.machine.clock_hz);
  auto& s = r.scenario_metrics;
  s["nodes"] = nodes;
  s["episodes"] = episodes;
  s["accuracy"] = episodes ? static_cast<double>(recovered) / episodes : 1.0;
  s["forward_oracle_agreement"] = episodes ? static_cast<double>(forward_ok) / episodes : 1.0;
  s["per_episode"] = per_episode;
  return res;
}

}  // namespace ru::bench
