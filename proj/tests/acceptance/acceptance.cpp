// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failed criteria.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "ru/agents/system.hpp"
#include "ru/bench/bench.hpp"
#include "ru/bench/verify.hpp"
#include "ru/isa/assembler.hpp"
#include "ru/knowledge/loader.hpp"
#include "ru/oracle/generators.hpp"
#include "ru/planner/domain.hpp"
#include "ru/term/parser.hpp"
#include "ru/util/file.hpp"

#ifndef RU_SAMPLES_DIR
#define RU_SAMPLES_DIR "samples"
#endif

using namespace ru;
namespace fs = std::filesystem;

namespace {

constexpr double kJoulesPerCycle = 7.5e-9;

int failed = 0;

void report(const char* id, bool ok, const std::string& detail) {
  std::printf("%s %s %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failed;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// A runnable program with the host-side context it needs.
struct Job {
  std::string name;
  std::shared_ptr<TermStore> host = std::make_shared<TermStore>();
  std::shared_ptr<const Program> program;
  MachineContext ctx;
};

std::string sample(const std::string& f) { return std::string(RU_SAMPLES_DIR) + "/" + f; }

std::vector<Job> sample_jobs() {
  std::vector<Job> out;
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(RU_SAMPLES_DIR))
    if (e.path().extension() == ".rua") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const fs::path& p : files) {
    Job j;
    j.name = p.filename().string();
    j.program = std::make_shared<Program>(assemble(read_text_file(p.string())));
    j.ctx.neural = std::make_shared<MockNeuralBackend>();
    TermStore& h = *j.host;
    auto kb = std::make_shared<KnowledgeBase>();
    if (j.name == "ancestors.rua") *kb = load_kb_file(h, sample("family.rkb"));
    j.ctx.kb = kb;
    if (j.name == "reach.rua") j.ctx.graph = std::make_shared<SemanticGraph>(load_graph_file(h, sample("risks.rsg")));
    if (j.name == "stack.rua") {
      j.ctx.domain = std::make_shared<PlanningDomain>(load_domain_file(h, sample("blocks.rpd")));
      PlanningProblem pr = load_problem_file(h, sample("blocks.rpp"));
      j.ctx.objects = pr.objects;
      j.ctx.initial_beliefs = pr.init;
    }
    if (j.name == "sense.rua") {
      for (const char* t : {"temp(kitchen, 21)", "temp(hall, 18)", "humidity(hall, 40)", "temp(attic, 30)"})
        j.ctx.percepts[0].push_back(parse_term(h, t));
    }
    out.push_back(std::move(j));
  }
  return out;
}

// Random UNIFY programs over generated term pairs, succeeding and failing.
std::vector<Job> unify_jobs(std::uint64_t seed, int n) {
  std::vector<Job> out;
  Rng rng(seed);
  for (int i = 0; i < n; ++i) {
    Job j;
    j.name = "unify#" + std::to_string(i);
    auto [x, y] = gen::random_term_pair(*j.host, rng);
    const std::string src = ".lits\nx: " + j.host->to_string(x) + ".\ny: " + j.host->to_string(y) +
                            ".\n.code\nLOADT B0, x\nLOADT B1, y\nUNIFY C1, B0, B1\nHALT\n";
    j.program = std::make_shared<Program>(assemble(src));
    out.push_back(std::move(j));
  }
  return out;
}

// Random blocksworld PLAN programs that execute their plan.
std::vector<Job> plan_jobs(std::uint64_t seed, int n) {
  std::vector<Job> out;
  Rng rng(seed);
  for (int i = 0; i < n; ++i) {
    Job j;
    j.name = "plan#" + std::to_string(i);
    TermStore& h = *j.host;
    j.ctx.domain = std::make_shared<PlanningDomain>(gen::blocksworld_domain(h));
    PlanningProblem pr = gen::random_blocksworld(h, rng, 3 + static_cast<std::size_t>(i % 3));
    j.ctx.objects = pr.objects;
    j.ctx.initial_beliefs = pr.init;
    std::string goal = "and(";
    for (std::size_t k = 0; k < pr.goal.size(); ++k) goal += (k ? ", " : "") + h.to_string(pr.goal[k]);
    goal += ")";
    const std::string src = ".lits\ng: " + goal +
                            ".\n.code\nLOADT G0, g\nPLAN A0, G0\nBRS s\nHALT\ns:\nCOMMIT A0\nBRS s\nHALT\n";
    j.program = std::make_shared<Program>(assemble(src));
    out.push_back(std::move(j));
  }
  return out;
}

// Compute-only agent programs for the capacity run: each mixes INFER, UNIFY,
// BELIEVE and, for every fourth agent, PLAN.
std::vector<AgentSpec> capacity_specs(TermStore& host, std::uint32_t n) {
  auto kb = std::make_shared<KnowledgeBase>();
  std::string facts;
  for (int i = 0; i < 12; ++i) facts += "e(n" + std::to_string(i) + ", n" + std::to_string(i + 1) + "). ";
  load_kb(host, *kb, facts + "r(X, Y) :- e(X, Y). r(X, Y) :- e(X, Z), r(Z, Y).");
  auto domain = std::make_shared<PlanningDomain>(gen::blocksworld_domain(host));
  Rng rng(77);
  std::vector<AgentSpec> out;
  for (std::uint32_t i = 0; i < n; ++i) {
    AgentSpec s;
    s.context.kb = kb;
    std::string src = ".lits\nq: r(n" + std::to_string(i % 12) + ", Y).\nu: f(X, g(b)).\nv: f(a" +
                      std::to_string(i) + ", Z).\n";
    std::string code = ".code\nLOADT B0, q\nINFER B1, B0\nw:\nBRS k\nJMP d\nk:\nBELIEVE B1, 200\nNEXT B1\nJMP w\n"
                       "d:\nLOADT B2, u\nLOADT B3, v\nUNIFY C1, B2, B3\n";
    if (i % 4 == 0) {
      s.context.domain = domain;
      PlanningProblem pr = gen::random_blocksworld(host, rng, 3);
      s.context.objects = pr.objects;
      s.context.initial_beliefs = pr.init;
      std::string goal = "and(";
      for (std::size_t k = 0; k < pr.goal.size(); ++k) goal += (k ? ", " : "") + host.to_string(pr.goal[k]);
      src += "g: " + goal + ").\n";
      code += "LOADT G0, g\nPLAN A0, G0\nBRS s\nHALT\ns:\nCOMMIT A0\nBRS s\n";
    }
    code += "HALT\n";
    s.program = std::make_shared<Program>(assemble(src + code));
    s.priority.urgency = static_cast<double>(i % 5) / 5.0;
    s.priority.utility = static_cast<double>(i % 3) / 3.0;
    out.push_back(std::move(s));
  }
  return out;
}

constexpr std::uint64_t kMaxCycles = 20'000'000;

void ac1(const std::vector<Job>& corpus) {
  std::uint64_t unify_min = UINT64_MAX, plan_min = UINT64_MAX, unify_n = 0, plan_n = 0;
  std::string bad;
  for (const Job& j : corpus) {
    Machine m(*j.host, j.program, j.ctx);
    m.run(kMaxCycles);
    const auto& c = m.state().counters;
    const auto u = static_cast<std::uint8_t>(Opcode::Unify);
    const auto p = static_cast<std::uint8_t>(Opcode::Plan);
    if (c.opcode_counts[u]) {
      unify_n += c.opcode_counts[u];
      unify_min = std::min(unify_min, c.min_reason[u]);
      if (c.min_reason[u] < 10 && bad.empty()) bad = j.name;
    }
    if (c.opcode_counts[p]) {
      plan_n += c.opcode_counts[p];
      plan_min = std::min(plan_min, c.min_reason[p]);
      if (c.min_reason[p] < 100 && bad.empty()) bad = j.name;
    }
  }
  const bool ok = unify_n > 0 && plan_n > 0 && unify_min >= 10 && plan_min >= 100;
  report("AC1", ok,
         std::to_string(unify_n) + " UNIFY (min occupancy " + std::to_string(unify_min) + "), " +
             std::to_string(plan_n) + " PLAN (min occupancy " + std::to_string(plan_min) + ")" +
             (bad.empty() ? "" : ", first offender " + bad));
}

void ac2(const std::vector<Job>& corpus) {
  std::uint64_t runs = 0, mismatches = 0;
  auto check = [&](const MetricsReport& r) {
    ++runs;
    if (r.energy_joules != static_cast<double>(r.cycles) * kJoulesPerCycle) ++mismatches;
  };
  for (const Job& j : corpus) {
    Machine m(*j.host, j.program, j.ctx);
    check(m.metrics(m.run(kMaxCycles)));
  }
  for (const char* sc : bench::kScenarios) {
    bench::BenchSpec s;
    s.scenario = sc;
    if (std::string(sc) == "kg-nav") s.nodes = 5000;
    check(bench::run_bench(s).report);
  }
  report("AC2", runs > 0 && mismatches == 0,
         std::to_string(runs) + " runs, " + std::to_string(mismatches) + " energy mismatches");
}

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

// limit <= 0 means untimed.
void suite(const char* id, const bench::SuiteResult& r, double limit) {
  const bool ok = r.ok() && (limit <= 0 || r.seconds < limit);
  std::string d = r.name + ": " + std::to_string(r.cases) + " cases, " + std::to_string(r.failures) +
                  " failures, " + fixed(r.seconds) + " s";
  if (limit > 0) d += " (limit " + fixed(limit) + " s)";
  if (!r.first_failure.empty()) d += "; " + r.first_failure;
  report(id, ok, d);
}

void ac6() {
  bench::BenchSpec s;
  s.scenario = "kg-nav";
  s.nodes = 100'000;
  const auto t0 = std::chrono::steady_clock::now();
  const bench::BenchResult r = bench::run_bench(s);
  const double secs = seconds_since(t0);
  const double agreement = r.report.scenario_metrics["agreement"].get<double>();
  report("AC6", r.oracle_ok && !r.fault && agreement == 1.0 && secs < 120.0,
         "100000 nodes, agreement " + fixed(agreement) + ", " + fixed(secs) + " s (limit 120 s)");
}

void ac7() {
  TermStore host;
  const std::vector<AgentSpec> specs = capacity_specs(host, 64);
  std::uint64_t solo_sum = 0;
  std::vector<std::uint64_t> solo_hash;
  for (const AgentSpec& s : specs) {
    Machine m(host, s.program, s.context, s.machine);
    m.run(kMaxCycles);
    solo_sum += m.state().cycle;
    solo_hash.push_back(m.trace_hash());
  }
  SchedulerConfig cfg;
  cfg.messaging = false;
  AgentSystem sys(host, cfg);
  for (const AgentSpec& s : specs) sys.spawn_agent(s);
  const SystemMetrics m = sys.run_system(1'000'000'000);
  std::uint32_t halted = 0, hash_eq = 0;
  for (std::uint32_t i = 0; i < sys.size(); ++i) {
    halted += sys.status(i) == AgentStatus::Halted && sys.machine(i).state().halt == HaltReason::Halted;
    hash_eq += sys.machine(i).trace_hash() == solo_hash[i];
  }
  const bool identity = m.global_cycles == solo_sum + m.switches * cfg.switch_penalty;
  report("AC7", m.outcome == SystemOutcome::Completed && halted == 64 && hash_eq == 64 && identity,
         std::to_string(halted) + "/64 halted, " + std::to_string(hash_eq) + "/64 solo hashes equal, global " +
             std::to_string(m.global_cycles) + " vs " + std::to_string(solo_sum) + " + " +
             std::to_string(m.switches) + " x " + std::to_string(cfg.switch_penalty));
}

void ac8(const std::vector<Job>& corpus) {
  std::uint64_t runs = 0, bad = 0;
  std::string first;
  for (const Job& j : corpus) {
    Machine a(*j.host, j.program, j.ctx);
    Machine b(*j.host, j.program, j.ctx);
    a.run(kMaxCycles);
    b.run(kMaxCycles);
    const std::uint64_t total = a.state().cycle;
    ++runs;
    if (a.trace_hash() != b.trace_hash() || total != b.state().cycle) {
      ++bad;
      if (first.empty()) first = j.name + " replay";
    }

    // Checkpoint halfway, then compare the suffix event streams.
    Machine c(*j.host, j.program, j.ctx);
    while (c.state().cycle < total / 2 && !c.halted()) c.step();
    const Checkpoint cp = c.checkpoint();
    std::string sa, sb;
    c.set_trace_sink([&](const TraceEvent& e) { sa += to_json_line(e) + "\n"; });
    c.run(kMaxCycles);
    Machine d(*j.host, j.program, j.ctx);
    d.restore(cp);
    d.set_trace_sink([&](const TraceEvent& e) { sb += to_json_line(e) + "\n"; });
    d.run(kMaxCycles);
    ++runs;
    if (sa != sb || c.trace_hash() != d.trace_hash() || d.trace_hash() != a.trace_hash()) {
      ++bad;
      if (first.empty()) first = j.name + " checkpoint";
    }
  }
  for (const char* sc : bench::kScenarios) {
    bench::BenchSpec s;
    s.scenario = sc;
    if (std::string(sc) == "kg-nav") s.nodes = 5000;
    ++runs;
    if (bench::report_text(bench::run_bench(s).report, false) != bench::report_text(bench::run_bench(s).report, false)) {
      ++bad;
      if (first.empty()) first = std::string(sc) + " report";
    }
  }
  TermStore host;
  const std::vector<AgentSpec> specs = capacity_specs(host, 64);
  std::vector<std::uint64_t> h[2];
  for (auto& hv : h) {
    AgentSystem sys(host);
    for (const AgentSpec& s : specs) sys.spawn_agent(s);
    sys.run_system(1'000'000'000);
    for (std::uint32_t i = 0; i < sys.size(); ++i) hv.push_back(sys.machine(i).trace_hash());
  }
  ++runs;
  if (h[0] != h[1]) {
    ++bad;
    if (first.empty()) first = "64-agent system";
  }
  report("AC8", bad == 0,
         std::to_string(runs) + " replay/checkpoint checks, " + std::to_string(bad) + " mismatches" +
             (first.empty() ? "" : ", first " + first));
}

}  // namespace

int main() {
  std::vector<Job> corpus = sample_jobs();
  for (auto& j : unify_jobs(11, 300)) corpus.push_back(std::move(j));
  for (auto& j : plan_jobs(12, 40)) corpus.push_back(std::move(j));

  auto guard = [](const char* id, const std::function<void()>& f) {
    try {
      f();
    } catch (const std::exception& e) {
      report(id, false, std::string("exception: ") + e.what());
    }
  };
  guard("AC1", [&] { ac1(corpus); });
  guard("AC2", [&] { ac2(corpus); });
  guard("AC3", [] { suite("AC3", bench::verify_unify(1, 10'000), 10.0); });
  guard("AC4", [] { suite("AC4", bench::verify_inference(1, 50), 30.0); });
  guard("AC5", [] { suite("AC5", bench::verify_planner(1, 100), 60.0); });
  guard("AC6", [] { ac6(); });
  guard("AC7", [] { ac7(); });
  guard("AC8", [&] { ac8(corpus); });
  guard("AC9", [] {
    const bench::SuiteResult codec = bench::verify_codec(1, 1000);
    const bench::SuiteResult as = bench::verify_asm(RU_SAMPLES_DIR);
    const bool ok = codec.ok() && as.ok();
    std::string d = "codec " + std::to_string(codec.cases) + " cases / " + std::to_string(codec.failures) +
                    " failures; asm " + std::to_string(as.cases) + " files / " + std::to_string(as.failures) +
                    " failures";
    if (!codec.first_failure.empty()) d += "; " + codec.first_failure;
    if (!as.first_failure.empty()) d += "; " + as.first_failure;
    report("AC9", ok, d);
  });
  guard("AC10", [] { suite("AC10", bench::verify_beliefs(1, 100, 1000), 0); });
  return failed;
}
