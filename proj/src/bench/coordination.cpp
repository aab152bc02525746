#include <stdexcept>

#include "ru/bench/bench.hpp"
#include "ru/isa/assembler.hpp"
#include "ru/knowledge/loader.hpp"

namespace ru::bench {
namespace {

struct RoundResult {
  std::vector<std::uint32_t> awards;  // winning bidder per task
  SystemMetrics system;
  bool complete = true;
};

std::string initiator_source(std::uint32_t bidders, std::uint32_t tasks) {
  std::string src = ".lits\n";
  for (std::uint32_t t = 0; t < tasks; ++t) src += "t" + std::to_string(t) + ": task(" + std::to_string(t) + ").\n";
  src += ".code\n";
  for (std::uint32_t t = 0; t < tasks; ++t) {
    src += "  LOADT B0, t" + std::to_string(t) + "\n";
    for (std::uint32_t b = 1; b <= bidders; ++b) src += "  SEND " + std::to_string(b) + ", B0, contract\n";
  }
  for (std::uint32_t i = 0; i < bidders * tasks; ++i) src += "  RECV B1\n  BELIEVE B1, 255\n";
  return src + "  HALT\n";
}

std::string bidder_source(std::uint32_t id, std::uint32_t tasks) {
  std::string src = ".lits\n";
  for (std::uint32_t t = 0; t < tasks; ++t) {
    src += "q" + std::to_string(t) + ": bid(task(" + std::to_string(t) + "), a" + std::to_string(id) + ", V).\n";
  }
  src += ".code\n";
  for (std::uint32_t t = 0; t < tasks; ++t) {
    src += "  RECV B0\n  LOADT B1, q" + std::to_string(t) + "\n  INFER B2, B1\n  SEND 0, B2, contract\n";
  }
  return src + "  HALT\n";
}

}  // namespace

BenchResult bench_negotiate(const BenchSpec& spec, const BidTable* fixed_bids) {
  if (fixed_bids && (fixed_bids->empty() || fixed_bids->front().empty())) {
    throw std::invalid_argument("bid table needs at least one bidder and one task");
  }
  const std::uint32_t agents = fixed_bids ? static_cast<std::uint32_t>(fixed_bids->size() + 1)
                                          : std::max<std::uint32_t>(2, spec.agents.value_or(8));
  const std::uint32_t bidders = agents - 1;
  const std::uint32_t tasks =
      fixed_bids ? static_cast<std::uint32_t>(fixed_bids->front().size()) : (spec.queries.value_or(4));
  const std::uint32_t max_rounds = spec.episodes.value_or(20);
  constexpr std::uint32_t kStableRounds = 3;
  Rng rng(spec.seed);

  // Base utilities are fixed per run; each round adds noise that shrinks
  // as the negotiation proceeds.
  std::vector<std::vector<std::uint64_t>> base(bidders + 1, std::vector<std::uint64_t>(tasks));
  for (std::uint32_t b = 1; b <= bidders; ++b) {
    for (std::uint32_t t = 0; t < tasks; ++t) base[b][t] = rng.below(100);
  }
  const auto init_prog = std::make_shared<Program>(assemble(initiator_source(bidders, tasks)));
  std::vector<std::shared_ptr<Program>> bidder_progs(bidders + 1);
  for (std::uint32_t b = 1; b <= bidders; ++b) {
    bidder_progs[b] = std::make_shared<Program>(assemble(bidder_source(b, tasks)));
  }

  BenchResult res;
  MetricsReport& r = res.report;
  r.scenario = "negotiate";
  std::vector<std::vector<std::uint32_t>> history;
  std::uint64_t decision_latency = 0;
  std::uint64_t switch_overhead = 0;
  std::uint64_t switches = 0;
  std::uint64_t messages = 0;
  bool identity = true;
  std::optional<std::uint32_t> converged;
  for (std::uint32_t round = 1; round <= max_rounds && !converged; ++round) {
    TermStore host;
    AgentSystem sys(host, spec.scheduler);
    AgentSpec init;
    init.program = init_prog;
    init.machine = spec.machine;
    sys.spawn_agent(init);
    const std::uint64_t amplitude = 40 / round;
    for (std::uint32_t b = 1; b <= bidders; ++b) {
      std::string facts;
      for (std::uint32_t t = 0; t < tasks; ++t) {
        const std::uint64_t bid = fixed_bids ? fixed_bids->at(b - 1).at(t) : base[b][t] + rng.below(amplitude + 1);
        facts += "bid(task(" + std::to_string(t) + "), a" + std::to_string(b) + ", " + std::to_string(bid) + ").\n";
      }
      auto kb = std::make_shared<KnowledgeBase>();
      load_kb(host, *kb, facts);
      AgentSpec a;
      a.program = bidder_progs[b];
      a.context.kb = kb;
      a.machine = spec.machine;
      sys.spawn_agent(a);
    }
    const SystemMetrics sm = sys.run_system(UINT64_MAX);
    if (sm.outcome != SystemOutcome::Completed) {
      res.fault = true;
      res.problems.push_back("round " + std::to_string(round) + ": " + to_string(sm.outcome));
    }
    for (std::uint32_t i = 0; i < sys.size(); ++i) {
      if (sys.machine(i).state().halt == HaltReason::Fault) {
        res.fault = true;
        res.problems.push_back("agent " + std::to_string(i) + ": " + sys.machine(i).state().fault);
      }
      accumulate_counters(r, sys.machine(i));
    }
    r.cycles += sm.global_cycles;
    decision_latency += sm.total_decision_latency;
    switch_overhead += sm.switch_overhead;
    switches += sm.switches;
    messages += sm.messages_delivered;
    identity = identity &&
               sm.global_cycles == sm.on_core_cycles + sm.switch_overhead + sm.wire_cycles + sm.idle_cycles;

    // Award each task to the highest bid received; ties to the lower id.
    MachineState& st = sys.machine(0).state();
    std::vector<std::uint32_t> award(tasks, 0);
    std::vector<std::int64_t> best(tasks, -1);
    const Term pattern =
        st.store.compound("bid", {st.store.variable("T"), st.store.variable("A"), st.store.variable("V")});
    for (const auto& [b, bind] : st.beliefs.query(st.store, pattern)) {
      const Term c = b.content;
      const auto t = static_cast<std::uint32_t>(st.store.value(st.store.arg(st.store.arg(c, 0), 0)));
      const std::string who(st.store.symbol_name(st.store.symbol(st.store.arg(c, 1))));
      const auto id = static_cast<std::uint32_t>(std::stoul(who.substr(1)));
      const std::int64_t v = st.store.value(st.store.arg(c, 2));
      if (v > best[t] || (v == best[t] && id < award[t])) {
        best[t] = v;
        award[t] = id;
      }
    }
    history.push_back(award);
    if (history.size() > kStableRounds) {
      const std::size_t c = history.size() - 1 - kStableRounds;
      bool stable = true;
      for (std::size_t i = c + 1; i < history.size(); ++i) stable = stable && history[i] == history[c];
      if (stable) converged = static_cast<std::uint32_t>(c + 1);
    }
  }

  std::vector<double> counts(bidders, 0.0);
  if (!history.empty()) {
    for (std::uint32_t w : history.back()) {
      if (w >= 1) counts[w - 1] += 1.0;
    }
  }
  double mean = 0.0;
  for (double c : counts) mean += c;
  mean /= static_cast<double>(bidders);
  double var = 0.0;
  for (double c : counts) var += (c - mean) * (c - mean);
  var /= static_cast<double>(bidders);

  r.outcome = res.fault ? "fault" : "halted";
  r.finalize(spec.machine.energy_per_cycle, spec.machine.clock_hz);
  auto& s = r.scenario_metrics;
  s["agents"] = agents;
  s["tasks"] = tasks;
  s["rounds_run"] = history.size();
  s["converged"] = converged.has_value();
  s["convergence_rounds"] = converged ? *converged : 0;
  s["decision_latency"] = decision_latency;
  s["switch_overhead_cycles"] = switch_overhead;
  s["switches"] = switches;
  s["messages_delivered"] = messages;
  s["fairness_variance"] = var;
  s["award_counts"] = counts;
  s["final_awards"] = history.empty() ? std::vector<std::uint32_t>{} : history.back();
  s["accounting_identity_holds"] = identity;
  res.oracle_ok = identity;
  return res;
}

}  // namespace ru::bench
