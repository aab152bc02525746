#include "ru/bench/bench.hpp"
#include "ru/isa/assembler.hpp"
#include "ru/oracle/generators.hpp"
#include "ru/util/hash.hpp"

namespace ru::bench {

PlanningDomain red_cubes_domain(TermStore& store) {
  return parse_domain(store,
                      "operator pick(X)\n"
                      "  pre: ontable(X), handempty\n"
                      "  add: holding(X)\n"
                      "  del: ontable(X), handempty.\n"
                      "operator drop(X)\n"
                      "  pre: holding(X), red(X)\n"
                      "  add: in_bin(X), handempty\n"
                      "  del: holding(X).\n"
                      "operator place(X)\n"
                      "  pre: holding(X)\n"
                      "  add: ontable(X), handempty\n"
                      "  del: holding(X).\n");
}

PlanningProblem red_cubes_problem(TermStore& store, Rng& rng, std::size_t cubes, std::size_t red) {
  PlanningProblem p;
  std::vector<Term> names;
  for (std::size_t i = 0; i < cubes; ++i) names.push_back(store.atom("c" + std::to_string(i + 1)));
  std::vector<std::size_t> order(cubes);
  for (std::size_t i = 0; i < cubes; ++i) order[i] = i;
  for (std::size_t i = cubes; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
  std::vector<char> is_red(cubes, 0);
  for (std::size_t i = 0; i < std::min(red, cubes); ++i) is_red[order[i]] = 1;
  p.objects = names;
  for (std::size_t i = 0; i < cubes; ++i) {
    p.init.push_back(store.compound("ontable", {names[i]}));
    p.init.push_back(store.compound(is_red[i] ? "red" : "blue", {names[i]}));
    if (is_red[i]) p.goal.push_back(store.compound("in_bin", {names[i]}));
  }
  p.init.push_back(store.atom("handempty"));
  return p;
}

BenchResult bench_robotics(const BenchSpec& spec) {
  const std::uint32_t episodes = spec.episodes.value_or(20);
  Rng rng(spec.seed);
  BenchResult res;
  MetricsReport& r = res.report;
  r.scenario = "robotics";
  MachineConfig cfg = spec.machine;
  // Replan budget of 10: the first PLAN plus up to ten more.
  constexpr std::uint64_t kReplanBudget = 10;
  if (cfg.max_plans == 0) cfg.max_plans = kReplanBudget + 1;
  const std::uint64_t replan_budget = cfg.max_plans - 1;

  std::uint64_t valid = 0;
  std::uint64_t optimal = 0;
  std::uint64_t optimal_subset = 0;
  std::uint64_t plans = 0;
  std::uint64_t expansions = 0;
  std::uint64_t replans = 0;
  std::uint64_t max_episode_replans = 0;
  std::uint64_t commit_failures = 0;
  auto per_episode = nlohmann::ordered_json::array();
  for (std::uint32_t e = 0; e < episodes; ++e) {
    TermStore host;
    const bool cubes = e % 2 == 0;
    auto domain = std::make_shared<PlanningDomain>(cubes ? red_cubes_domain(host) : gen::blocksworld_domain(host));
    PlanningProblem problem;
    if (cubes) {
      const std::size_t n = 3 + rng.below(4);
      const std::size_t red = 1 + rng.below(4);
      problem = red_cubes_problem(host, rng, n, red);
    } else {
      problem = gen::random_blocksworld(host, rng, 3 + rng.below(2));
    }
    const oracle::BfsPlanResult bfs = oracle::bfs_plan(host, *domain, problem, 8);

    std::string goal;
    if (problem.goal.size() == 1) {
      goal = host.to_string(problem.goal[0]);
    } else {
      goal = "and(";
      for (std::size_t i = 0; i < problem.goal.size(); ++i) goal += (i ? ", " : "") + host.to_string(problem.goal[i]);
      goal += ")";
    }
    auto program = std::make_shared<Program>(assemble(".lits\ng: " + goal +
                                                      ".\n"
                                                      ".code\n"
                                                      "  LOADT G0, g\n"
                                                      "replan:\n"
                                                      "  PLAN A0, G0\n"
                                                      "  BRS exec\n"
                                                      "  HALT\n"
                                                      "exec:\n"
                                                      "  COMMIT A0\n"
                                                      "  BRK replan\n"
                                                      "  BRS exec\n"
                                                      "  HALT\n"));
    MachineContext ctx;
    ctx.domain = domain;
    ctx.objects = problem.objects;
    ctx.initial_beliefs = problem.init;
    MachineConfig ecfg = cfg;
    ecfg.seed = hash_combine(spec.seed, e);
    Machine m(host, program, ctx, ecfg);
    const RunOutcome outcome = m.run(UINT64_MAX);
    if (outcome != RunOutcome::Halted) {
      res.fault = true;
      res.problems.push_back("episode " + std::to_string(e) + ": " + m.state().fault);
    }
    accumulate(r, m);

    MachineState& st = m.state();
    bool reached = true;
    for (Term g : problem.goal) reached = reached && st.beliefs.find(st.store, g).has_value();
    valid += reached;
    const auto& lengths = st.counters.plan_lengths;
    const bool first_optimal = !lengths.empty() && bfs.solved && lengths.front() == bfs.plan.size();
    if (bfs.solved) {
      ++optimal_subset;
      optimal += first_optimal;
      if (!first_optimal) res.oracle_ok = false;
    }
    plans += st.counters.plans;
    expansions += st.counters.plan_expansions;
    const std::uint64_t episode_replans = st.counters.plans > 0 ? st.counters.plans - 1 : 0;
    replans += episode_replans;
    max_episode_replans = std::max(max_episode_replans, episode_replans);
    commit_failures += st.counters.commit_failures;
    per_episode.push_back({{"kind", cubes ? "red_cubes" : "blocksworld"},
                           {"goal_reached", reached},
                           {"plans", st.counters.plans},
                           {"replans", episode_replans},
                           {"first_plan_length", lengths.empty() ? 0 : lengths.front()},
                           {"bfs_optimum", bfs.solved ? static_cast<std::int64_t>(bfs.plan.size()) : -1},
                           {"commit_failures", st.counters.commit_failures}});
  }
  r.outcome = res.fault ? "fault" : "halted";
  r.finalize(spec.machine.energy_per_cycle, spec.machine.clock_hz);
  auto& s = r.scenario_metrics;
  s["episodes"] = episodes;
  s["commit_fail_prob"] = cfg.commit_fail_prob;
  s["replan_budget"] = replan_budget;
  s["valid_rate"] = episodes ? static_cast<double>(valid) / episodes : 1.0;
  s["optimal_rate"] = optimal_subset ? static_cast<double>(optimal) / optimal_subset : 1.0;
  s["optimal_subset"] = optimal_subset;
  s["mean_expansions"] = plans ? static_cast<double>(expansions) / plans : 0.0;
  s["replans"] = replans;
  s["max_episode_replans"] = max_episode_replans;
  s["commit_failures"] = commit_failures;
  s["per_episode"] = per_episode;
  return res;
}

}  // namespace ru::bench
