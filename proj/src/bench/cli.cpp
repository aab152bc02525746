#include "ru/bench/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "ru/bench/bench.hpp"
#include "ru/bench/verify.hpp"
#include "ru/isa/assembler.hpp"
#include "ru/knowledge/loader.hpp"
#include "ru/planner/domain.hpp"
#include "ru/term/parser.hpp"
#include "ru/util/config.hpp"
#include "ru/util/file.hpp"

#ifndef RU_SAMPLES_DIR
#define RU_SAMPLES_DIR "samples"
#endif

namespace ru::cli {
namespace {

class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

bool is_binary(const std::string& path) { return std::filesystem::path(path).extension() == ".rub"; }

Program load_program(const std::string& path) {
  const std::string bytes = read_text_file(path);
  return is_binary(path) ? read_rub(bytes) : assemble(bytes);
}

// --config wins over RU_CONFIG; no file means defaults.
std::optional<KeyValueConfig> load_config(const std::string& flag) {
  std::string path = flag;
  if (path.empty()) {
    if (const char* env = std::getenv("RU_CONFIG")) path = env;
  }
  if (path.empty()) return std::nullopt;
  return KeyValueConfig::load(path);
}

void warn_unused(const KeyValueConfig& kv) {
  for (const std::string& k : kv.unused_keys()) std::cerr << "ru: warning: unknown config key '" << k << "'\n";
}

bool uses(const Program& p, Opcode op) {
  for (const Instruction& ins : p.code) {
    if (ins.op == op) return true;
  }
  return false;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_text_file(path, text);
  }
}

struct RunArgs {
  std::string program;
  std::string kb;
  std::string graph;
  std::string domain;
  std::string problem;
  std::string trace;
  std::string config;
  std::string json;
  std::uint64_t max_cycles = 10'000'000;
  std::optional<std::uint64_t> seed;
};

int do_run(const RunArgs& a) {
  MachineConfig cfg;
  if (auto kv = load_config(a.config)) {
    cfg.apply(*kv);
    warn_unused(*kv);
  }
  if (a.seed) cfg.seed = *a.seed;
  auto program = std::make_shared<Program>(load_program(a.program));
  if ((uses(*program, Opcode::Infer) || uses(*program, Opcode::Next)) && a.kb.empty() && a.graph.empty()) {
    throw UsageError("program uses INFER; pass --kb or --graph");
  }
  if (uses(*program, Opcode::Plan) && a.domain.empty()) throw UsageError("program uses PLAN; pass --domain");

  TermStore host;
  MachineContext ctx;
  auto kb = std::make_shared<KnowledgeBase>();
  if (!a.kb.empty()) *kb = load_kb_file(host, a.kb);
  ctx.kb = kb;
  MockNeuralConfig ncfg;
  ncfg.seed = cfg.seed;
  ctx.neural = std::make_shared<MockNeuralBackend>(ncfg);
  if (!a.graph.empty()) ctx.graph = std::make_shared<SemanticGraph>(load_graph_file(host, a.graph));
  if (!a.domain.empty()) ctx.domain = std::make_shared<PlanningDomain>(load_domain_file(host, a.domain));
  if (!a.problem.empty()) {
    PlanningProblem p = load_problem_file(host, a.problem);
    ctx.objects = p.objects;
    ctx.initial_beliefs = p.init;
  }

  Machine m(host, program, ctx, cfg);
  std::ofstream trace;
  if (!a.trace.empty()) {
    trace.open(a.trace, std::ios::binary);
    if (!trace) throw std::runtime_error("cannot write " + a.trace);
    m.set_trace_sink([&trace](const TraceEvent& e) { trace << to_json_line(e) << '\n'; });
  }
  const RunOutcome outcome = m.run(a.max_cycles);
  MetricsReport r = m.metrics(outcome);
  r.scenario = "run";
  write_output(a.json, to_json(r).dump(2) + "\n");
  if (outcome == RunOutcome::Fault) std::cerr << "ru: fault: " << m.state().fault << '\n';
  return outcome == RunOutcome::Halted ? kExitOk : kExitFault;
}

struct BenchArgs {
  bench::BenchSpec spec;
  std::string config;
  std::string json;
  std::optional<double> fail_prob;
  std::optional<std::uint64_t> latency;
  std::optional<std::uint64_t> latency_max;
};

int do_bench(BenchArgs a) {
  bench::BenchSpec& spec = a.spec;
  if (auto kv = load_config(a.config)) {
    spec.machine.apply(*kv);
    spec.scheduler.apply(*kv);
    warn_unused(*kv);
  }
  if (a.fail_prob) spec.machine.commit_fail_prob = *a.fail_prob;
  if (a.latency) spec.latency_min = spec.latency_max = *a.latency;
  if (a.latency_max) spec.latency_max = *a.latency_max;
  spec.machine.seed = spec.seed;
  spec.scheduler.seed = spec.seed;
  const bench::BenchResult res = bench::run_bench(spec);
  write_output(a.json, bench::report_text(res.report));
  for (const std::string& p : res.problems) std::cerr << "ru: " << p << '\n';
  if (res.fault) return kExitFault;
  return res.oracle_ok ? kExitOk : kExitMismatch;
}

int do_verify(const std::string& samples, std::uint64_t seed) {
  bool ok = true;
  for (const bench::SuiteResult& s : bench::verify_all(samples, seed)) {
    std::cout << (s.ok() ? "ok   " : "FAIL ") << s.name << ": " << s.cases << " cases, " << s.failures
              << " failures (" << s.seconds << " s)\n";
    if (!s.first_failure.empty()) std::cout << "     first: " << s.first_failure << '\n';
    ok = ok && s.ok();
  }
  return ok ? kExitOk : kExitMismatch;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Reasoning unit simulator, assembler and benchmark harness", "ru"};
  app.require_subcommand(1);

  std::string asm_in;
  std::string asm_out;
  auto* asm_cmd = app.add_subcommand("asm", "Assemble .rua source into a .rub binary");
  asm_cmd->add_option("input", asm_in, "Assembly source")->required();
  asm_cmd->add_option("-o,--output", asm_out, "Output binary")->required();

  std::string dasm_in;
  std::string dasm_out;
  auto* dasm_cmd = app.add_subcommand("dasm", "Disassemble a .rub (or .rua) program");
  dasm_cmd->add_option("input", dasm_in, "Program file")->required();
  dasm_cmd->add_option("-o,--output", dasm_out, "Listing file (default stdout)");

  RunArgs ra;
  std::uint64_t run_seed = 0;
  auto* run_cmd = app.add_subcommand("run", "Run one program on a single machine");
  run_cmd->add_option("program", ra.program, "Program (.rub or .rua)")->required();
  run_cmd->add_option("--kb", ra.kb, "Knowledge base (.rkb)");
  run_cmd->add_option("--graph", ra.graph, "Semantic graph (.rsg)");
  run_cmd->add_option("--domain", ra.domain, "Planning domain (.rpd)");
  run_cmd->add_option("--problem", ra.problem, "Problem (.rpp): objects and initial beliefs");
  run_cmd->add_option("--trace", ra.trace, "Write trace events as JSON lines");
  run_cmd->add_option("--max-cycles", ra.max_cycles, "Cycle budget");
  auto* seed_opt = run_cmd->add_option("--seed", run_seed, "RNG seed");
  run_cmd->add_option("--config", ra.config, "key=value config file (default $RU_CONFIG)");
  run_cmd->add_option("--json", ra.json, "Write the metrics report here (default stdout)");

  BenchArgs ba;
  double fail_prob = 0.0;
  std::uint64_t latency = 0;
  std::uint64_t latency_max = 0;
  auto* bench_cmd = app.add_subcommand("bench", "Run a benchmark scenario");
  bench_cmd->add_option("scenario", ba.spec.scenario, "kg-nav, diagnose, robotics, negotiate or llm")
      ->required()
      ->check(CLI::IsMember({"kg-nav", "diagnose", "robotics", "negotiate", "llm"}));
  bench_cmd->add_option("--nodes", ba.spec.nodes, "Graph or causal-model size");
  bench_cmd->add_option("--agents", ba.spec.agents, "Number of agents");
  bench_cmd->add_option("--queries", ba.spec.queries, "Queries (kg-nav, llm) or tasks (negotiate)");
  bench_cmd->add_option("--episodes", ba.spec.episodes, "Episodes (diagnose, robotics) or rounds (negotiate)");
  bench_cmd->add_option("--seed", ba.spec.seed, "Seed");
  bench_cmd->add_option("--config", ba.config, "key=value config file (default $RU_CONFIG)");
  bench_cmd->add_option("--json", ba.json, "Write the report here (default stdout)");
  auto* fail_opt = bench_cmd->add_option("--fail-prob", fail_prob, "COMMIT failure injection probability")
                       ->check(CLI::Range(0.0, 1.0));
  bench_cmd->add_option("--conformance", ba.spec.conformance, "Mock neural conformance probability")
      ->check(CLI::Range(0.0, 1.0));
  auto* lat_opt = bench_cmd->add_option("--latency", latency, "Mock neural latency in cycles");
  auto* lat_max_opt = bench_cmd->add_option("--latency-max", latency_max, "Upper bound for a latency range");

  std::string samples = RU_SAMPLES_DIR;
  std::uint64_t verify_seed = 1;
  auto* verify_cmd = app.add_subcommand("verify", "Run the oracle equivalence suites");
  verify_cmd->add_option("--samples", samples, "Directory of .rua programs for the assembler round trip");
  verify_cmd->add_option("--seed", verify_seed, "Seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*asm_cmd) {
      write_text_file(asm_out, write_rub(assemble(read_text_file(asm_in))));
      return kExitOk;
    }
    if (*dasm_cmd) {
      write_output(dasm_out, disassemble(load_program(dasm_in)));
      return kExitOk;
    }
    if (*run_cmd) {
      if (*seed_opt) ra.seed = run_seed;
      return do_run(ra);
    }
    if (*bench_cmd) {
      if (*fail_opt) ba.fail_prob = fail_prob;
      if (*lat_opt) ba.latency = latency;
      if (*lat_max_opt) ba.latency_max = latency_max;
      return do_bench(ba);
    }
    if (*verify_cmd) return do_verify(samples, verify_seed);
  } catch (const UsageError& e) {
    std::cerr << "ru: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    // Bad input files are usage errors; everything else is a fault.
    std::cerr << "ru: " << e.what() << '\n';
    if (dynamic_cast<const AsmError*>(&e) || dynamic_cast<const ru::ParseError*>(&e) ||
        dynamic_cast<const ProgramError*>(&e) || dynamic_cast<const ConfigError*>(&e) ||
        dynamic_cast<const std::invalid_argument*>(&e)) {
      return kExitUsage;
    }
    return kExitFault;
  }
  return kExitUsage;
}

}  // namespace ru::cli
