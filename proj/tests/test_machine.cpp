#include <gtest/gtest.h>

#include "ru/isa/assembler.hpp"
#include "ru/knowledge/loader.hpp"
#include "ru/machine/machine.hpp"
#include "ru/oracle/generators.hpp"
#include "ru/term/parser.hpp"

using namespace ru;

namespace {

struct Rig {
  TermStore host;
  MachineContext ctx;
  MachineConfig cfg;

  std::unique_ptr<Machine> make(const std::string& src) {
    return std::make_unique<Machine>(host, std::make_shared<Program>(assemble(src)), ctx, cfg);
  }
  void kb(const std::string& text) {
    auto k = std::make_shared<KnowledgeBase>();
    load_kb(host, *k, text);
    ctx.kb = k;
  }
};

std::uint64_t min_reason(const Machine& m, Opcode op) {
  return m.state().counters.min_reason[static_cast<std::uint8_t>(op)];
}

constexpr const char* kFamily =
    "parent(tom, bob). parent(bob, ann).\n"
    "ancestor(X, Y) :- parent(X, Y).\n"
    "ancestor(X, Y) :- parent(X, Z), ancestor(Z, Y).\n";

}  // namespace

TEST(Pipeline, HaltRetiresAtCycleSix) {
  Rig r;
  auto m = r.make(".code\nHALT\n");
  EXPECT_EQ(m->run(1000), RunOutcome::Halted);
  EXPECT_EQ(m->state().cycle, 6u);
  EXPECT_EQ(m->state().counters.retired, 1u);
}

TEST(Pipeline, LoadThenHalt) {
  Rig r;
  auto m = r.make(".lits\ng: p(a).\n.code\nLOADT B0, g\nHALT\n");
  EXPECT_EQ(m->run(1000), RunOutcome::Halted);
  EXPECT_EQ(m->state().cycle, 7u);
  EXPECT_EQ(m->state().counters.retired, 2u);
}

TEST(Pipeline, BudgetExhausted) {
  Rig r;
  auto m = r.make(".lits\ng: p(a).\n.code\nLOADT B0, g\nHALT\n");
  EXPECT_EQ(m->run(3), RunOutcome::BudgetExhausted);
  EXPECT_EQ(m->state().counters.retired, 0u);
}

TEST(Pipeline, FallingOffTheEndFaults) {
  Rig r;
  auto m = r.make(".lits\ng: p(a).\n.code\nLOADT B0, g\n");
  EXPECT_EQ(m->run(1000), RunOutcome::Fault);
  EXPECT_FALSE(m->state().fault.empty());
}

TEST(Pipeline, InferWithoutKbFaults) {
  Rig r;
  auto m = r.make(".lits\ng: p(X).\n.code\nLOADT B0, g\nINFER B1, B0\nHALT\n");
  EXPECT_EQ(m->run(10000), RunOutcome::Fault);
}

TEST(Pipeline, LoneRecvDeadlocks) {
  Rig r;
  auto m = r.make(".code\nRECV B0\nHALT\n");
  EXPECT_EQ(m->run(10000), RunOutcome::Deadlock);
  EXPECT_TRUE(m->blocked_on_recv());
}

TEST(Timing, UnifyFloor) {
  Rig r;
  auto m = r.make(".lits\nx: a.\ny: a.\n.code\nLOADT B0, x\nLOADT B1, y\nUNIFY C0, B0, B1\nHALT\n");
  ASSERT_EQ(m->run(10000), RunOutcome::Halted);
  EXPECT_GE(min_reason(*m, Opcode::Unify), 10u);
  EXPECT_TRUE(m->state().flag_s);
}

TEST(Timing, PlanFloor) {
  Rig r;
  r.ctx.domain = std::make_shared<PlanningDomain>(gen::blocksworld_domain(r.host));
  for (const char* s : {"ontable(a)", "ontable(b)", "clear(a)", "clear(b)", "handempty"}) {
    r.ctx.initial_beliefs.push_back(parse_term(r.host, s));
  }
  auto m = r.make(".lits\ng: on(a, b).\n.code\nLOADT G0, g\nPLAN A0, G0\nHALT\n");
  ASSERT_EQ(m->run(100000), RunOutcome::Halted);
  EXPECT_GE(min_reason(*m, Opcode::Plan), 100u);
  EXPECT_TRUE(m->state().flag_s);
  EXPECT_EQ(m->state().a[0].status, ActionStatus::Planned);
}

TEST(Exec, AncestorQuery) {
  Rig r;
  r.kb(kFamily);
  auto m = r.make(".lits\ng: ancestor(tom, X).\n.code\nLOADT B0, g\nINFER B1, B0\nHALT\n");
  ASSERT_EQ(m->run(100000), RunOutcome::Halted);
  EXPECT_TRUE(m->state().flag_s);
  EXPECT_EQ(m->state().store.to_string(m->state().b[1].term), "ancestor(tom,bob)");
  // One resolution step to the first answer: well under 100 Reason cycles.
  EXPECT_LE(min_reason(*m, Opcode::Infer), 100u);
}

TEST(Exec, NextEnumeratesAnswers) {
  Rig r;
  r.kb(kFamily);
  auto m = r.make(
      ".lits\ng: ancestor(tom, X).\n.code\nLOADT B0, g\nINFER B1, B0\nw:\nBRS keep\nHALT\nkeep:\nBELIEVE B1, "
      "255\nNEXT B1\nJMP w\n");
  ASSERT_EQ(m->run(100000), RunOutcome::Halted);
  auto& st = m->state();
  EXPECT_EQ(st.beliefs.size(), 2u);
  EXPECT_TRUE(st.beliefs.find(st.store, parse_term(st.store, "ancestor(tom, ann)")));
}

TEST(Exec, BelieveSetsKOnContradiction) {
  Rig r;
  auto m = r.make(".lits\np: p(a).\nn: not(p(a)).\n.code\nLOADT B0, p\nBELIEVE B0, 255\nLOADT B1, n\nBELIEVE B1, 10\nHALT\n");
  ASSERT_EQ(m->run(100000), RunOutcome::Halted);
  EXPECT_TRUE(m->state().flag_k);
  EXPECT_EQ(m->state().beliefs.conflicts().size(), 1u);
}

TEST(Exec, GoalStackPriority) {
  Rig r;
  auto m = r.make(
      ".lits\nlo: low.\nhi: high.\n.code\nLOADT G0, lo\nGPUSH G0, 1\nLOADT G1, hi\nGPUSH G1, 9\nGPOP G2\nHALT\n");
  ASSERT_EQ(m->run(100000), RunOutcome::Halted);
  EXPECT_EQ(m->state().store.to_string(m->state().g[2].term), "high");
  EXPECT_EQ(m->state().goal_stack.size(), 1u);
}

TEST(Exec, PerceiveFilters) {
  Rig r;
  r.ctx.percepts[0] = {parse_term(r.host, "temp(k, 20)"), parse_term(r.host, "noise(x)"),
                       parse_term(r.host, "temp(h, 25)")};
  auto m = r.make(".lits\nf: temp(R, T).\n.code\nl:\nPERCEIVE B0, 0, f\nBRS k\nHALT\nk:\nBELIEVE B0, 200\nJMP l\n");
  ASSERT_EQ(m->run(100000), RunOutcome::Halted);
  EXPECT_EQ(m->state().beliefs.size(), 2u);
}

TEST(Exec, CommitFollowsPlan) {
  Rig r;
  r.ctx.domain = std::make_shared<PlanningDomain>(gen::blocksworld_domain(r.host));
  for (const char* s : {"ontable(a)", "ontable(b)", "clear(a)", "clear(b)", "handempty"}) {
    r.ctx.initial_beliefs.push_back(parse_term(r.host, s));
  }
  auto m = r.make(".lits\ng: on(a, b).\n.code\nLOADT G0, g\nPLAN A0, G0\nl:\nCOMMIT A0\nBRS l\nHALT\n");
  ASSERT_EQ(m->run(100000), RunOutcome::Halted);
  auto& st = m->state();
  EXPECT_TRUE(st.beliefs.find(st.store, parse_term(st.store, "on(a, b)")));
  // Two validated steps; the third COMMIT finds the plan committed and
  // clears the register without counting.
  EXPECT_EQ(st.counters.commits, 2u);
  EXPECT_EQ(st.a[0].status, ActionStatus::Empty);
  EXPECT_FALSE(st.flag_s);
}

TEST(Exec, CommitFailureInjection) {
  Rig r;
  r.cfg.commit_fail_prob = 1.0;
  r.ctx.domain = std::make_shared<PlanningDomain>(gen::blocksworld_domain(r.host));
  for (const char* s : {"ontable(a)", "ontable(b)", "clear(a)", "clear(b)", "handempty"}) {
    r.ctx.initial_beliefs.push_back(parse_term(r.host, s));
  }
  auto m = r.make(".lits\ng: on(a, b).\n.code\nLOADT G0, g\nPLAN A0, G0\nCOMMIT A0\nHALT\n");
  ASSERT_EQ(m->run(100000), RunOutcome::Halted);
  EXPECT_EQ(m->state().a[0].status, ActionStatus::Failed);
  EXPECT_FALSE(m->state().flag_s);
  EXPECT_EQ(m->state().counters.commit_failures, 1u);
}

TEST(Exec, NeuralOccupancy) {
  Rig r;
  MockNeuralConfig n;
  n.latency_min = n.latency_max = 5000;
  r.ctx.neural = std::make_shared<MockNeuralBackend>(n);
  auto m = r.make(".lits\np: hello.\ns: echo(X).\n.code\nLOADT B0, p\nLOADT B1, s\nNEURAL B2, B0, B1\nHALT\n");
  ASSERT_EQ(m->run(100000), RunOutcome::Halted);
  EXPECT_EQ(min_reason(*m, Opcode::Neural), 5200u);
  EXPECT_TRUE(m->state().flag_s);
}

TEST(Exec, NeuralNonConformant) {
  Rig r;
  MockNeuralConfig n;
  n.conformance_prob = 0.0;
  r.ctx.neural = std::make_shared<MockNeuralBackend>(n);
  auto m = r.make(".lits\np: hello.\ns: echo(X).\n.code\nLOADT B0, p\nLOADT B1, s\nNEURAL B2, B0, B1\nHALT\n");
  ASSERT_EQ(m->run(100000), RunOutcome::Halted);
  EXPECT_FALSE(m->state().flag_s);
  EXPECT_EQ(m->state().counters.neural_calls, 1u);
  EXPECT_EQ(m->state().counters.neural_conformant, 0u);
}

TEST(Cache, HitAfterMiss) {
  CacheModel c;
  const MemAccess first = c.access(7, 0);
  EXPECT_EQ(first.cycles, 100u);
  EXPECT_EQ(first.level, MemLevel::Heap);
  const MemAccess second = c.access(7, 0);
  EXPECT_EQ(second.cycles, 1u);
  EXPECT_EQ(second.level, MemLevel::L1);
  EXPECT_EQ(c.stats().accesses(), 2u);
}

TEST(Cache, L2AbsorbsL1Overflow) {
  CacheModel c;
  for (int round = 0; round < 4; ++round) {
    for (std::uint32_t i = 0; i < 2000; ++i) c.access(i, 0);
  }
  const CacheStats& s = c.stats();
  EXPECT_GT(s.l1_misses, 0u);
  EXPECT_GT(s.l2_hits, 0u);
  EXPECT_EQ(s.heap_accesses, 2000u);
  EXPECT_EQ(s.l1_hits + s.l1_misses, 8000u);
  EXPECT_EQ(s.l1_misses, s.l2_hits + s.l2_misses);
}

// Latency never exceeds the level it was served from, and re-touching a hot
// set never costs more than the first pass.
TEST(CacheProperty, SecondPassNoSlower) {
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    CacheModel c;
    std::vector<std::uint32_t> cells;
    for (int i = 0; i < 300; ++i) cells.push_back(static_cast<std::uint32_t>(rng.below(100000)));
    std::uint64_t first = 0, second = 0;
    for (auto x : cells) first += c.access(x, 0).cycles;
    for (auto x : cells) second += c.access(x, 0).cycles;
    EXPECT_LE(second, first);
  }
}

TEST(Checkpoint, RestoreReplaysIdentically) {
  Rig r;
  r.kb(kFamily);
  auto m = r.make(
      ".lits\ng: ancestor(tom, X).\n.code\nLOADT B0, g\nINFER B1, B0\nw:\nBRS keep\nHALT\nkeep:\nBELIEVE B1, "
      "255\nNEXT B1\nJMP w\n");
  for (int i = 0; i < 40; ++i) m->step();
  const Checkpoint cp = m->checkpoint();
  for (int i = 0; i < 100; ++i) m->step();
  const std::uint64_t h1 = m->trace_hash();
  const std::uint64_t c1 = m->state().cycle;
  m->restore(cp);
  for (int i = 0; i < 100; ++i) m->step();
  EXPECT_EQ(m->trace_hash(), h1);
  EXPECT_EQ(m->state().cycle, c1);
}

TEST(Checkpoint, WrongProgram) {
  Rig r;
  auto a = r.make(".code\nHALT\n");
  auto b = r.make(".code\nYIELD\nHALT\n");
  EXPECT_THROW(b->restore(a->checkpoint()), CheckpointError);
}

TEST(Checkpoint, HaltedStaysHalted) {
  Rig r;
  auto m = r.make(".code\nHALT\n");
  m->run(100);
  const Checkpoint cp = m->checkpoint();
  auto n = r.make(".code\nHALT\n");
  n->restore(cp);
  EXPECT_TRUE(n->halted());
  EXPECT_EQ(n->state().cycle, 6u);
}

TEST(Replay, SameSeedSameHash) {
  auto run = [] {
    Rig r;
    r.kb(kFamily);
    r.cfg.seed = 9;
    r.cfg.commit_fail_prob = 0.5;
    auto m = r.make(".lits\ng: ancestor(X, Y).\n.code\nLOADT B0, g\nINFER B1, B0\nw:\nBRS k\nHALT\nk:\nNEXT B1\nJMP w\n");
    m->run(100000);
    return m->trace_hash();
  };
  EXPECT_EQ(run(), run());
}

namespace {

// One LOADT/INFER pair per query literal.
std::string infer_batch(const std::vector<std::string>& goals) {
  std::string src = ".lits\n";
  for (std::size_t i = 0; i < goals.size(); ++i) src += "q" + std::to_string(i) + ": " + goals[i] + ".\n";
  src += ".code\n";
  for (std::size_t i = 0; i < goals.size(); ++i) src += "LOADT B0, q" + std::to_string(i) + "\nINFER B1, B0\n";
  return src + "HALT\n";
}

}  // namespace

TEST(Speculation, SingleInferOnePrediction) {
  Rig r;
  r.kb(kFamily);
  auto m = r.make(infer_batch({"ancestor(tom, X)"}));
  ASSERT_EQ(m->run(100000), RunOutcome::Halted);
  EXPECT_EQ(m->speculation_stats().predictions, 1u);
}

TEST(Speculation, StableFirstClauseConverges) {
  Rig r;
  r.kb("q(X) :- n(X).\nq(X) :- m(X).\nn(1). n(2). n(3).\n");
  std::vector<std::string> goals;
  for (int i = 0; i < 200; ++i) goals.push_back("q(" + std::to_string(1 + i % 3) + ")");
  auto m = r.make(infer_batch(goals));
  ASSERT_EQ(m->run(10'000'000), RunOutcome::Halted);
  EXPECT_EQ(m->speculation_stats().predictions, 200u);
  EXPECT_EQ(m->speculation_stats().mispredictions, 0u);
}

TEST(Speculation, AlternatingIsCoinFlip) {
  Rig r;
  std::string kb = "p(X) :- even(X).\np(X) :- odd(X).\n";
  std::vector<std::string> goals;
  for (int i = 0; i < 1000; ++i) {
    kb += (i % 2 ? "odd(" : "even(") + std::to_string(i) + ").\n";
    goals.push_back("p(" + std::to_string(i) + ")");
  }
  r.kb(kb);
  auto m = r.make(infer_batch(goals));
  ASSERT_EQ(m->run(100'000'000), RunOutcome::Halted);
  const double rate = m->speculation_stats().misprediction_rate();
  EXPECT_NEAR(rate, 0.5, 0.1);
  EXPECT_EQ(m->speculation_stats().predictions, 1000u);
}

TEST(Metrics, EnergyIdentity) {
  Rig r;
  r.kb(kFamily);
  auto m = r.make(infer_batch({"ancestor(tom, X)", "ancestor(bob, X)"}));
  const RunOutcome o = m->run(100000);
  const MetricsReport rep = m->metrics(o);
  EXPECT_EQ(rep.energy_joules, static_cast<double>(rep.cycles) * 7.5e-9);
  EXPECT_EQ(rep.cache.l1_hits + rep.cache.l1_misses, m->state().cache.stats().accesses());
  const auto back = metrics_from_json(to_json(rep));
  EXPECT_EQ(to_json(back).dump(), to_json(rep).dump());
}
