#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ru/agents/system.hpp"
#include "ru/knowledge/semantic_graph.hpp"
#include "ru/machine/config.hpp"
#include "ru/machine/machine.hpp"
#include "ru/machine/metrics.hpp"
#include "ru/oracle/naive.hpp"

namespace ru::bench {

// Unset size fields take the scenario's default.
struct BenchSpec {
  std::string scenario;
  std::optional<std::uint32_t> nodes;
  std::optional<std::uint32_t> agents;
  std::optional<std::uint32_t> queries;
  std::optional<std::uint32_t> episodes;
  std::uint64_t seed = 42;
  // Mock neural backend (llm scenario).
  double conformance = 1.0;
  std::uint64_t latency_min = 5000;
  std::uint64_t latency_max = 5000;
  MachineConfig machine;
  SchedulerConfig scheduler;
};

struct BenchResult {
  MetricsReport report;
  // False when a result disagreed with its ground truth.
  bool oracle_ok = true;
  // A machine faulted.
  bool fault = false;
  std::vector<std::string> problems;
};

inline constexpr std::array<const char*, 5> kScenarios = {"kg-nav", "diagnose", "robotics", "negotiate", "llm"};

// Throws std::invalid_argument for an unknown scenario.
BenchResult run_bench(const BenchSpec& spec);

// --- knowledge-graph navigation -------------------------------------------

inline constexpr std::array<const char*, 3> kKgLabels = {"risk_factor", "causes", "part_of"};

struct KgQuery {
  std::uint32_t source = 0;
  std::uint32_t label = 0;
  // Ground truth computed at generation time, ascending node ids.
  std::vector<std::uint32_t> truth;
};

struct KgInstance {
  oracle::LabeledEdges graph;
  std::vector<KgQuery> queries;
};

KgInstance gen_kg(std::uint32_t nodes, std::uint32_t edges_per_node, std::uint64_t seed, std::uint32_t queries = 8);
// Nodes become atoms n0..n<N-1>; labels come from kKgLabels.
SemanticGraph build_graph(TermStore& store, const oracle::LabeledEdges& g);
Term kg_node(TermStore& store, std::uint32_t id);

BenchResult bench_kg_nav(const BenchSpec& spec);

// --- causal diagnosis ------------------------------------------------------

struct DiagnosisInstance {
  std::string kb;
  std::string observed;
  std::string planted_root;
  std::optional<std::uint32_t> nodes;
};

// A causal DAG over x0..x<n-1> whose roots are the first tenth of the nodes;
// exactly one active root reaches the observed fault.
DiagnosisInstance gen_diagnosis(Rng& rng, std::uint32_t nodes);

BenchResult bench_diagnose(const BenchSpec& spec);

// --- planning --------------------------------------------------------------

PlanningDomain red_cubes_domain(TermStore& store);
// `cubes` cubes c1..cn, `red` of them red; the goal bins every red cube.
PlanningProblem red_cubes_problem(TermStore& store, Rng& rng, std::size_t cubes, std::size_t red);

BenchResult bench_robotics(const BenchSpec& spec);

// --- coordination ----------------------------------------------------------

// Bid table indexed [bidder - 1][task]. When given, bids are used as is
// every round (no noise) and --agents/--queries follow its shape.
using BidTable = std::vector<std::vector<std::uint64_t>>;
BenchResult bench_negotiate(const BenchSpec& spec, const BidTable* fixed_bids = nullptr);

// --- neural traps ----------------------------------------------------------

BenchResult bench_llm(const BenchSpec& spec);

// --- shared helpers --------------------------------------------------------

// Adds one machine's counters into a report (cycles included).
void accumulate(MetricsReport& into, const Machine& m);
// Adds counters but not cycles; multi-agent runs take cycles from the
// global clock instead.
void accumulate_counters(MetricsReport& into, const Machine& m);
// Pretty JSON; wall clock included only when asked so reports can be
// compared byte for byte.
std::string report_text(const MetricsReport& r, bool include_wall_clock = true);

}  // namespace ru::bench
