#include "ru/planner/grounding.hpp"

#include <algorithm>

#include "ru/term/unify.hpp"

namespace ru {
namespace {

struct Builder {
  TermStore& store;
  GroundTask task;

  FactId fact(Term t) {
    auto [it, inserted] = task.fact_ids.try_emplace(t, static_cast<FactId>(task.facts.size()));
    if (inserted) task.facts.push_back(t);
    return it->second;
  }
};

std::vector<FactId> dedup(std::vector<FactId> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

GroundTask ground(TermStore& store, const PlanningDomain& domain, const PlanningProblem& problem) {
  check_domain(store, domain);
  check_problem(store, problem);
  Builder b{store, {}};
  std::vector<char> reached;
  auto mark = [&](FactId f) {
    if (reached.size() <= f) reached.resize(f + 1, 0);
    reached[f] = 1;
  };
  for (Term t : problem.init) {
    const FactId f = b.fact(t);
    mark(f);
    b.task.init.push_back(f);
  }
  b.task.init = dedup(b.task.init);

  // Every instantiation, filtered afterwards by relaxed reachability.
  struct Candidate {
    Term name;
    std::vector<Term> pre, add, del;
  };
  std::vector<Candidate> candidates;
  for (const auto& op : domain.operators) {
    const std::size_t k = op.params.size();
    const std::size_t n = problem.objects.size();
    if (k > 0 && n == 0) continue;
    std::vector<std::size_t> idx(k, 0);
    while (true) {
      Bindings bind;
      for (std::size_t i = 0; i < k; ++i) bind.bind(op.params[i], problem.objects[idx[i]]);
      Candidate c{apply_bindings(store, op.head, bind), {}, {}, {}};
      for (Term l : op.pre) c.pre.push_back(apply_bindings(store, l, bind));
      for (Term l : op.add) c.add.push_back(apply_bindings(store, l, bind));
      for (Term l : op.del) c.del.push_back(apply_bindings(store, l, bind));
      candidates.push_back(std::move(c));
      std::size_t i = k;
      while (i > 0 && ++idx[i - 1] == n) idx[--i] = 0;
      if (i == 0) break;
    }
  }

  auto is_reached = [&](Term t) {
    auto it = b.task.fact_ids.find(t);
    return it != b.task.fact_ids.end() && it->second < reached.size() && reached[it->second];
  };
  std::vector<char> kept(candidates.size(), 0);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (kept[i]) continue;
      const Candidate& c = candidates[i];
      if (!std::all_of(c.pre.begin(), c.pre.end(), is_reached)) continue;
      kept[i] = 1;
      changed = true;
      for (Term a : c.add) mark(b.fact(a));
    }
  }

  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (!kept[i]) continue;
    const Candidate& c = candidates[i];
    GroundAction a{c.name, {}, {}, {}};
    for (Term t : c.pre) a.pre.push_back(b.fact(t));
    for (Term t : c.add) a.add.push_back(b.fact(t));
    // Deleting a fact nothing can make true is a no-op.
    for (Term t : c.del) {
      auto it = b.task.fact_ids.find(t);
      if (it != b.task.fact_ids.end()) a.del.push_back(it->second);
    }
    a.pre = dedup(std::move(a.pre));
    a.add = dedup(std::move(a.add));
    a.del = dedup(std::move(a.del));
    b.task.actions.push_back(std::move(a));
  }

  for (Term g : problem.goal) {
    if (!is_reached(g)) {
      b.task.goal_unreachable = true;
      continue;
    }
    b.task.goal.push_back(b.task.fact_ids.at(g));
  }
  b.task.goal = dedup(b.task.goal);
  return std::move(b.task);
}

}  // namespace ru
