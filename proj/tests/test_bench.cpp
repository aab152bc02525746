#include <gtest/gtest.h>

#include "ru/bench/bench.hpp"
#include "ru/knowledge/forward.hpp"
#include "ru/knowledge/loader.hpp"
#include "ru/oracle/generators.hpp"
#include "ru/oracle/naive.hpp"

using namespace ru;
using namespace ru::bench;

namespace {

BenchSpec make(const char* scenario) {
  BenchSpec s;
  s.scenario = scenario;
  return s;
}

}  // namespace

TEST(KgNav, GeneratorIsDeterministic) {
  const KgInstance a = gen_kg(500, 3, 9);
  const KgInstance b = gen_kg(500, 3, 9);
  EXPECT_EQ(a.graph.edges, b.graph.edges);
  ASSERT_EQ(a.queries.size(), b.queries.size());
  for (std::size_t i = 0; i < a.queries.size(); ++i) EXPECT_EQ(a.queries[i].truth, b.queries[i].truth);
  const KgInstance c = gen_kg(500, 3, 10);
  EXPECT_NE(a.graph.edges, c.graph.edges);
}

TEST(KgNav, TruthMatchesBfs) {
  const KgInstance k = gen_kg(1000, 3, 7);
  for (const KgQuery& q : k.queries) EXPECT_EQ(q.truth, oracle::reachable(k.graph, q.source, q.label));
}

TEST(KgNav, SmallRunAgrees) {
  BenchSpec s = make("kg-nav");
  s.nodes = 1000;
  const BenchResult r = run_bench(s);
  EXPECT_TRUE(r.oracle_ok);
  EXPECT_FALSE(r.fault);
  EXPECT_EQ(r.report.scenario_metrics["agreement"].get<double>(), 1.0);
  EXPECT_EQ(r.report.scenario_metrics["forward_agreement"].get<double>(), 1.0);
  EXPECT_GT(r.report.cycles, 0u);
}

TEST(KgNav, ZeroQueries) {
  BenchSpec s = make("kg-nav");
  s.nodes = 200;
  s.queries = 0;
  const BenchResult r = run_bench(s);
  EXPECT_TRUE(r.oracle_ok);
  EXPECT_EQ(r.report.cycles, 0u);
  EXPECT_TRUE(r.report.scenario_metrics["per_query"].empty());
}

TEST(Diagnose, RecoversPlantedRoot) {
  BenchSpec s = make("diagnose");
  s.episodes = 5;
  const BenchResult r = run_bench(s);
  EXPECT_TRUE(r.oracle_ok);
  EXPECT_EQ(r.report.scenario_metrics["accuracy"].get<double>(), 1.0);
}

TEST(Robotics, ReliableCommits) {
  BenchSpec s = make("robotics");
  s.episodes = 10;
  const BenchResult r = run_bench(s);
  EXPECT_TRUE(r.oracle_ok);
  EXPECT_EQ(r.report.scenario_metrics["valid_rate"].get<double>(), 1.0);
  EXPECT_EQ(r.report.scenario_metrics["optimal_rate"].get<double>(), 1.0);
  EXPECT_EQ(r.report.scenario_metrics["replans"].get<std::uint64_t>(), 0u);
}

TEST(Robotics, AlwaysFailingCommitsHitBudget) {
  BenchSpec s = make("robotics");
  s.episodes = 5;
  s.machine.commit_fail_prob = 1.0;
  const BenchResult r = run_bench(s);
  const auto& m = r.report.scenario_metrics;
  EXPECT_EQ(m["valid_rate"].get<double>(), 0.0);
  EXPECT_EQ(m["max_episode_replans"].get<std::uint64_t>(), m["replan_budget"].get<std::uint64_t>());
  EXPECT_EQ(m["replans"].get<std::uint64_t>(), 5 * m["replan_budget"].get<std::uint64_t>());
}

TEST(Negotiate, SingleBidderConvergesAtOnce) {
  BenchSpec s = make("negotiate");
  s.agents = 2;
  const BenchResult r = run_bench(s);
  const auto& m = r.report.scenario_metrics;
  EXPECT_TRUE(m["converged"].get<bool>());
  EXPECT_EQ(m["convergence_rounds"].get<std::uint32_t>(), 1u);
  EXPECT_EQ(m["fairness_variance"].get<double>(), 0.0);
  EXPECT_TRUE(m["accounting_identity_holds"].get<bool>());
}

TEST(Negotiate, FixedBidsGiveExactAwards) {
  BenchSpec s = make("negotiate");
  const BidTable bids = {{10, 50, 30}, {20, 40, 30}};
  const BenchResult r = bench_negotiate(s, &bids);
  const auto& m = r.report.scenario_metrics;
  ASSERT_FALSE(r.fault);
  EXPECT_EQ(m["final_awards"].get<std::vector<std::uint32_t>>(), (std::vector<std::uint32_t>{2, 1, 1}));
  EXPECT_DOUBLE_EQ(m["fairness_variance"].get<double>(), 0.25);
  EXPECT_EQ(m["convergence_rounds"].get<std::uint32_t>(), 1u);
  EXPECT_EQ(m["messages_delivered"].get<std::uint64_t>() % 2, 0u);
}

TEST(Negotiate, DefaultConverges) {
  const BenchResult r = run_bench(make("negotiate"));
  EXPECT_TRUE(r.oracle_ok);
  EXPECT_TRUE(r.report.scenario_metrics["converged"].get<bool>());
}

TEST(Llm, ConformanceExtremes) {
  BenchSpec s = make("llm");
  s.conformance = 1.0;
  BenchResult r = run_bench(s);
  EXPECT_TRUE(r.oracle_ok);
  EXPECT_EQ(r.report.scenario_metrics["schema_conformance_rate"].get<double>(), 1.0);
  EXPECT_EQ(r.report.scenario_metrics["round_trip_cycles_mean"].get<double>(), 5200.0);
  s.conformance = 0.0;
  r = run_bench(s);
  EXPECT_EQ(r.report.scenario_metrics["schema_conformance_rate"].get<double>(), 0.0);
}

TEST(Llm, HalfConformanceNearHalf) {
  BenchSpec s = make("llm");
  s.conformance = 0.5;
  s.agents = 10;
  s.queries = 100;
  const BenchResult r = run_bench(s);
  EXPECT_NEAR(r.report.scenario_metrics["schema_conformance_rate"].get<double>(), 0.5, 0.05);
}

TEST(Reports, ByteIdenticalAcrossRuns) {
  for (const char* sc : kScenarios) {
    BenchSpec s = make(sc);
    if (std::string(sc) == "kg-nav") s.nodes = 2000;
    const std::string a = report_text(run_bench(s).report, false);
    const std::string b = report_text(run_bench(s).report, false);
    EXPECT_EQ(a, b) << sc;
  }
}

TEST(Reports, UnknownScenarioThrows) { EXPECT_THROW(run_bench(make("nope")), std::invalid_argument); }

TEST(Reports, EnergyIdentity) {
  const BenchResult r = run_bench(make("diagnose"));
  EXPECT_EQ(r.report.energy_joules, static_cast<double>(r.report.cycles) * MachineConfig{}.energy_per_cycle);
}

TEST(DatalogProperty, ForwardMatchesNaiveFixpoint) {
  Rng rng(3);
  for (int i = 0; i < 30; ++i) {
    TermStore store;
    KnowledgeBase kb;
    load_kb(store, kb, gen::random_datalog(rng));
    const ForwardResult fr = solve_forward(store, kb);
    const std::set<std::string> naive = oracle::naive_fixpoint(oracle::clauses_of(store, kb));
    std::set<std::string> got;
    for (const Clause* c : kb.clauses())
      if (c->is_fact()) got.insert(store.to_string(c->head));
    for (Term t : fr.derived) got.insert(store.to_string(t));
    EXPECT_EQ(got, naive) << "kb " << i;
  }
}
