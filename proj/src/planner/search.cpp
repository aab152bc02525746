#include "ru/planner/search.hpp"

#include <algorithm>
#include <queue>
#include <unordered_map>

#include "ru/util/hash.hpp"

namespace ru {
namespace {

bool test(const StateBits& s, FactId f) { return (s[f >> 6] >> (f & 63)) & 1U; }
void set(StateBits& s, FactId f) { s[f >> 6] |= std::uint64_t{1} << (f & 63); }
void clear(StateBits& s, FactId f) { s[f >> 6] &= ~(std::uint64_t{1} << (f & 63)); }

struct StateHash {
  std::size_t operator()(const StateBits& s) const noexcept {
    std::uint64_t h = 0;
    for (auto w : s) h = hash_combine(h, w);
    return h;
  }
};

bool applicable(const GroundAction& a, const StateBits& s) {
  return std::all_of(a.pre.begin(), a.pre.end(), [&](FactId f) { return test(s, f); });
}

StateBits successor(const GroundAction& a, const StateBits& s) {
  StateBits out = s;
  for (FactId f : a.del) clear(out, f);
  for (FactId f : a.add) set(out, f);
  return out;
}

bool satisfies(const GroundTask& task, const StateBits& s) {
  return std::all_of(task.goal.begin(), task.goal.end(), [&](FactId f) { return test(s, f); });
}

}  // namespace

const char* to_string(PlanStatus s) {
  switch (s) {
    case PlanStatus::Solved: return "solved";
    case PlanStatus::Unsolvable: return "unsolvable";
    case PlanStatus::BudgetExceeded: return "budget_exceeded";
  }
  return "?";
}

std::uint32_t hmax(const GroundTask& task, const StateBits& state) {
  if (task.goal_unreachable) return kHInfinity;
  std::vector<std::uint32_t> cost(task.facts.size(), kHInfinity);
  for (FactId f = 0; f < task.facts.size(); ++f) {
    if (test(state, f)) cost[f] = 0;
  }
  auto goal_cost = [&] {
    std::uint32_t h = 0;
    for (FactId g : task.goal) h = std::max(h, cost[g]);
    return h;
  };
  // Layered relaxed planning graph: with unit costs, a fact's first layer is
  // its hmax cost.
  std::vector<char> fired(task.actions.size(), 0);
  for (std::uint32_t layer = 0;; ++layer) {
    if (goal_cost() <= layer) return goal_cost();
    bool grew = false;
    for (std::size_t i = 0; i < task.actions.size(); ++i) {
      if (fired[i]) continue;
      const GroundAction& a = task.actions[i];
      if (!std::all_of(a.pre.begin(), a.pre.end(), [&](FactId f) { return cost[f] <= layer; })) continue;
      fired[i] = 1;
      for (FactId f : a.add) {
        if (cost[f] == kHInfinity) {
          cost[f] = layer + 1;
          grew = true;
        }
      }
    }
    if (!grew) return goal_cost();
  }
}

std::uint32_t goal_count(const GroundTask& task, const StateBits& state) {
  if (task.goal_unreachable) return kHInfinity;
  std::uint32_t n = 0;
  for (FactId g : task.goal) n += test(state, g) ? 0 : 1;
  return n;
}

std::uint32_t hmax(TermStore& store, const PlanningDomain& domain, const PlanningProblem& problem) {
  GroundTask task = ground(store, domain, problem);
  StateBits s(task.words(), 0);
  for (FactId f : task.init) set(s, f);
  return hmax(task, s);
}

PlanResult plan(TermStore& store, const PlanningDomain& domain, const PlanningProblem& problem,
                const PlanConfig& config) {
  return plan(ground(store, domain, problem), config);
}

PlanResult plan(const GroundTask& task, const PlanConfig& config) {
  PlanResult result;
  auto h_of = [&](const StateBits& s) {
    return config.heuristic == Heuristic::HMax ? hmax(task, s) : goal_count(task, s);
  };

  struct Node {
    StateBits state;
    std::uint32_t parent;
    std::uint32_t action;
    std::uint32_t g;
  };
  struct Entry {
    std::uint32_t f, h;
    std::uint64_t seq;
    std::uint32_t node;
    bool operator>(const Entry& o) const {
      if (f != o.f) return f > o.f;
      if (h != o.h) return h > o.h;
      return seq > o.seq;
    }
  };
  constexpr std::uint32_t kNone = UINT32_MAX;

  std::vector<Node> nodes;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  std::unordered_map<StateBits, std::uint32_t, StateHash> best_g;
  std::uint64_t seq = 0;

  StateBits init(task.words(), 0);
  for (FactId f : task.init) set(init, f);
  const std::uint32_t h0 = h_of(init);
  if (h0 == kHInfinity) return result;
  nodes.push_back(Node{init, kNone, kNone, 0});
  best_g.emplace(init, 0);
  open.push(Entry{h0, h0, seq++, 0});
  result.generated = 1;

  while (!open.empty()) {
    const Entry top = open.top();
    open.pop();
    const Node& node = nodes[top.node];
    if (best_g.at(node.state) < node.g) continue;  // superseded by a cheaper path
    if (satisfies(task, node.state)) {
      for (std::uint32_t n = top.node; nodes[n].parent != kNone; n = nodes[n].parent) {
        result.plan.steps.push_back(task.actions[nodes[n].action].name);
      }
      std::reverse(result.plan.steps.begin(), result.plan.steps.end());
      result.status = PlanStatus::Solved;
      return result;
    }
    if (result.plan.expansions >= config.max_expansions) {
      result.status = PlanStatus::BudgetExceeded;
      return result;
    }
    ++result.plan.expansions;
    const std::uint32_t g = node.g + 1;
    const StateBits state = node.state;
    for (std::uint32_t i = 0; i < task.actions.size(); ++i) {
      const GroundAction& a = task.actions[i];
      if (!applicable(a, state)) continue;
      StateBits next = successor(a, state);
      auto it = best_g.find(next);
      if (it != best_g.end() && it->second <= g) continue;
      const std::uint32_t h = h_of(next);
      if (h == kHInfinity) continue;
      if (it == best_g.end()) {
        best_g.emplace(next, g);
      } else {
        it->second = g;
      }
      nodes.push_back(Node{std::move(next), top.node, i, g});
      open.push(Entry{g + h, h, seq++, static_cast<std::uint32_t>(nodes.size() - 1)});
      ++result.generated;
    }
  }
  return result;
}

}  // namespace ru
