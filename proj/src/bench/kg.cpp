#include <algorithm>
#include <map>

#include "ru/bench/bench.hpp"
#include "ru/isa/assembler.hpp"
#include "ru/knowledge/forward.hpp"
#include "ru/oracle/generators.hpp"
#include "ru/term/parser.hpp"

namespace ru::bench {

KgInstance gen_kg(std::uint32_t nodes, std::uint32_t edges_per_node, std::uint64_t seed, std::uint32_t queries) {
  Rng rng(seed);
  KgInstance inst;
  inst.graph = gen::random_graph(rng, nodes, edges_per_node, static_cast<std::uint32_t>(kKgLabels.size()));
  std::vector<std::vector<std::uint32_t>> has_label(kKgLabels.size());
  for (const auto& e : inst.graph.edges) has_label[e[1]].push_back(e[0]);
  for (std::uint32_t q = 0; q < queries; ++q) {
    KgQuery query;
    query.label = static_cast<std::uint32_t>(rng.below(kKgLabels.size()));
    const auto& pool = has_label[query.label];
    // Prefer sources with at least one matching edge so answers are not
    // trivially empty.
    query.source = pool.empty() ? static_cast<std::uint32_t>(rng.below(nodes)) : pool[rng.below(pool.size())];
    query.truth = oracle::reachable(inst.graph, query.source, query.label);
    inst.queries.push_back(std::move(query));
  }
  return inst;
}

Term kg_node(TermStore& store, std::uint32_t id) { return store.atom("n" + std::to_string(id)); }

SemanticGraph build_graph(TermStore& store, const oracle::LabeledEdges& g) {
  SemanticGraph out;
  std::vector<Term> nodes;
  nodes.reserve(g.nodes);
  for (std::uint32_t i = 0; i < g.nodes; ++i) {
    nodes.push_back(kg_node(store, i));
    out.add_node(nodes.back());
  }
  std::vector<Term> labels;
  for (std::uint32_t l = 0; l < g.labels; ++l) labels.push_back(store.atom(kKgLabels[l % kKgLabels.size()]));
  for (const auto& e : g.edges) out.add_edge(nodes[e[0]], labels[e[1]], nodes[e[2]]);
  return out;
}

namespace {

struct QueryTiming {
  std::uint64_t start = 0;
  std::uint64_t first = 0;
  std::uint64_t exhausted = 0;
  bool solved = false;
};

}  // namespace

BenchResult bench_kg_nav(const BenchSpec& spec) {
  const std::uint32_t nodes = spec.nodes.value_or(100'000);
  const std::uint32_t nq = spec.queries.value_or(8);
  const KgInstance inst = gen_kg(nodes, 3, spec.seed, nq);

  TermStore host;
  auto graph = std::make_shared<SemanticGraph>(build_graph(host, inst.graph));

  // One INFER/NEXT/BELIEVE loop per query.
  std::string src = ".lits\n";
  for (std::uint32_t i = 0; i < nq; ++i) {
    const KgQuery& q = inst.queries[i];
    src += "q" + std::to_string(i) + ": reach(n" + std::to_string(q.source) + ", " + kKgLabels[q.label] + ", X).\n";
  }
  src += ".code\n";
  std::vector<std::uint32_t> loadt_pc(nq), infer_pc(nq), next_pc(nq);
  std::uint32_t pc = 0;
  for (std::uint32_t i = 0; i < nq; ++i) {
    const std::string n = std::to_string(i);
    loadt_pc[i] = pc;
    infer_pc[i] = pc + 1;
    next_pc[i] = pc + 5;
    src += "  LOADT B0, q" + n + "\n  INFER B1, B0\nw" + n + ":\n  BRS b" + n + "\n  JMP d" + n + "\nb" + n +
           ":\n  BELIEVE B1, 255\n  NEXT B1\n  JMP w" + n + "\nd" + n + ":\n";
    pc += 7;
  }
  src += "  HALT\n";
  auto program = std::make_shared<Program>(assemble(src));

  MachineContext ctx;
  ctx.graph = graph;
  Machine m(host, program, ctx, spec.machine);
  std::vector<QueryTiming> timing(nq);
  std::map<std::uint32_t, std::uint32_t> query_of;
  for (std::uint32_t i = 0; i < nq; ++i) {
    query_of[loadt_pc[i]] = i;
    query_of[infer_pc[i]] = i;
    query_of[next_pc[i]] = i;
  }
  m.set_trace_sink([&](const TraceEvent& e) {
    if (e.stage != Stage::Writeback) return;
    auto it = query_of.find(e.pc);
    if (it == query_of.end()) return;
    QueryTiming& t = timing[it->second];
    const bool s = e.flags & 1;
    if (e.pc == loadt_pc[it->second]) {
      t.start = e.cycle;
    } else if (e.pc == infer_pc[it->second]) {
      t.solved = s;
      t.first = s ? e.cycle : 0;
      if (!s) t.exhausted = e.cycle;
    } else if (!s) {
      t.exhausted = e.cycle;
    }
  });
  // No queries means no work: the machine is never started.
  const RunOutcome outcome = nq ? m.run(UINT64_MAX) : RunOutcome::Halted;

  BenchResult res;
  res.fault = outcome != RunOutcome::Halted;
  if (res.fault) res.problems.push_back("machine stopped: " + std::string(to_string(outcome)) + " " + m.state().fault);
  MetricsReport& r = res.report;
  r.scenario = "kg-nav";
  r.outcome = to_string(outcome);
  accumulate(r, m);

  // Forward chaining over the same graph, one query-seeded program per
  // query so only the part of the graph the query can see is derived.
  TermStore& fs = host;
  KnowledgeBase base;
  {
    std::vector<Term> labels;
    for (const char* l : kKgLabels) labels.push_back(fs.atom(l));
    for (const auto& e : inst.graph.edges) {
      base.assert_clause(fs, fs.compound("edge", {kg_node(fs, e[0]), labels[e[1]], kg_node(fs, e[2])}));
    }
    const Term S = fs.variable("S"), L = fs.variable("L"), Y = fs.variable("Y"), Z = fs.variable("Z");
    base.assert_clause(fs, fs.compound("rf", {S, L, Y}), {fs.compound("q", {S, L}), fs.compound("edge", {S, L, Y})});
    base.assert_clause(fs, fs.compound("rf", {S, L, Y}),
                       {fs.compound("rf", {S, L, Z}), fs.compound("edge", {Z, L, Y})});
  }

  MachineState& st = m.state();
  TermStore& ms = st.store;
  std::uint64_t agree = 0;
  std::uint64_t forward_agree = 0;
  std::uint64_t answers_total = 0;
  auto per_query = nlohmann::ordered_json::array();
  for (std::uint32_t i = 0; i < nq; ++i) {
    const KgQuery& q = inst.queries[i];
    const Term pattern = ms.compound("reach", {kg_node(ms, q.source), ms.atom(kKgLabels[q.label]), ms.variable("X")});
    const auto found = st.beliefs.query(ms, pattern);
    bool ok = found.size() == q.truth.size();
    for (std::uint32_t t : q.truth) {
      if (!ok) break;
      ok = st.beliefs
               .find(ms, ms.compound("reach", {kg_node(ms, q.source), ms.atom(kKgLabels[q.label]), kg_node(ms, t)}))
               .has_value();
    }
    agree += ok;
    answers_total += found.size();
    if (!ok) res.problems.push_back("query " + std::to_string(i) + " disagrees with ground truth");

    KnowledgeBase kb = base;
    kb.assert_clause(fs, fs.compound("q", {kg_node(fs, q.source), fs.atom(kKgLabels[q.label])}));
    const ForwardResult fr = solve_forward(fs, kb);
    bool fok = fr.status == ForwardStatus::Fixpoint;
    std::vector<std::uint32_t> derived;
    for (Term d : fr.derived) {
      if (fs.symbol_name(fs.symbol(d)) != "rf") continue;
      const std::string name(fs.symbol_name(fs.symbol(fs.arg(d, 2))));
      derived.push_back(static_cast<std::uint32_t>(std::stoul(name.substr(1))));
    }
    std::sort(derived.begin(), derived.end());
    fok = fok && derived == q.truth;
    forward_agree += fok;
    if (!fok) res.problems.push_back("forward query " + std::to_string(i) + " disagrees with ground truth");

    const QueryTiming& t = timing[i];
    per_query.push_back({{"source", q.source},
                         {"label", kKgLabels[q.label]},
                         {"truth_size", q.truth.size()},
                         {"answers", found.size()},
                         {"agrees", ok},
                         {"backward_first_solution_cycles", t.solved ? t.first - t.start : 0},
                         {"backward_exhaustion_cycles", t.exhausted >= t.start ? t.exhausted - t.start : 0},
                         {"forward_firings", fr.steps},
                         {"forward_cycles", fr.steps * spec.machine.infer_cycles_per_step},
                         {"forward_agrees", fok}});
  }
  res.oracle_ok = agree == nq && forward_agree == nq;
  r.finalize(spec.machine.energy_per_cycle, spec.machine.clock_hz);
  auto& s = r.scenario_metrics;
  s["nodes"] = inst.graph.nodes;
  s["edges"] = inst.graph.edges.size();
  s["queries"] = nq;
  s["answers_total"] = answers_total;
  s["agreement"] = nq ? static_cast<double>(agree) / nq : 1.0;
  s["forward_agreement"] = nq ? static_cast<double>(forward_agree) / nq : 1.0;
  s["per_query"] = per_query;
  return res;
}

}  // namespace ru::bench
