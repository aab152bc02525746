#include <deque>
#include <map>

#include "ru/oracle/naive.hpp"

namespace ru::oracle {
namespace {

struct Act {
  std::string name;
  std::vector<std::string> pre, add, del;
};

using State = std::set<std::string>;

std::vector<Act> instantiate(const TermStore& store, const PlanningDomain& domain, const PlanningProblem& problem) {
  std::vector<Tree> objects;
  for (Term o : problem.objects) objects.push_back(to_tree(store, o));
  std::vector<Act> out;
  for (const OperatorSchema& op : domain.operators) {
    std::vector<std::string> params;
    for (Term p : op.params) params.push_back(store.to_string(p));
    if (!params.empty() && objects.empty()) continue;
    std::vector<std::size_t> idx(params.size(), 0);
    while (true) {
      Subst s;
      for (std::size_t i = 0; i < params.size(); ++i) s[params[i]] = objects[idx[i]];
      auto text = [&](Term t) { return oracle::apply(s, to_tree(store, t)).text(); };
      Act a{text(op.head), {}, {}, {}};
      for (Term t : op.pre) a.pre.push_back(text(t));
      for (Term t : op.add) a.add.push_back(text(t));
      for (Term t : op.del) a.del.push_back(text(t));
      out.push_back(std::move(a));
      std::size_t k = 0;
      while (k < idx.size() && ++idx[k] == objects.size()) idx[k++] = 0;
      if (k == idx.size()) break;
    }
  }
  return out;
}

}  // namespace

BfsPlanResult bfs_plan(const TermStore& store, const PlanningDomain& domain, const PlanningProblem& problem,
                       std::size_t max_depth, std::size_t max_states) {
  BfsPlanResult result;
  const std::vector<Act> acts = instantiate(store, domain, problem);
  State init;
  for (Term t : problem.init) init.insert(to_tree(store, t).text());
  std::vector<std::string> goal;
  for (Term t : problem.goal) goal.push_back(to_tree(store, t).text());
  auto satisfied = [&](const State& s) {
    for (const auto& g : goal) {
      if (!s.count(g)) return false;
    }
    return true;
  };

  // parent map: state -> (previous state, action index)
  std::map<State, std::pair<State, std::size_t>> parent;
  std::map<State, std::size_t> depth;
  std::deque<State> frontier{init};
  depth[init] = 0;
  while (!frontier.empty()) {
    State s = frontier.front();
    frontier.pop_front();
    if (satisfied(s)) {
      result.solved = true;
      std::vector<std::string> rev;
      while (s != init) {
        const auto& [prev, a] = parent.at(s);
        rev.push_back(acts[a].name);
        s = prev;
      }
      result.plan.assign(rev.rbegin(), rev.rend());
      return result;
    }
    const std::size_t d = depth[s];
    if (d >= max_depth) {
      result.truncated = true;
      continue;
    }
    for (std::size_t i = 0; i < acts.size(); ++i) {
      const Act& a = acts[i];
      bool ok = true;
      for (const auto& p : a.pre) ok = ok && s.count(p);
      if (!ok) continue;
      State n = s;
      for (const auto& x : a.del) n.erase(x);
      for (const auto& x : a.add) n.insert(x);
      if (depth.count(n)) continue;
      if (depth.size() >= max_states) {
        result.truncated = true;
        continue;
      }
      depth[n] = d + 1;
      parent.emplace(n, std::make_pair(s, i));
      frontier.push_back(std::move(n));
    }
  }
  return result;
}

}  // namespace ru::oracle
