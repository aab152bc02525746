#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ru/knowledge/knowledge_base.hpp"
#include "ru/oracle/tree.hpp"
#include "ru/planner/domain.hpp"

namespace ru::oracle {

struct TreeClause {
  Tree head;
  std::vector<Tree> body;
};

std::vector<TreeClause> clauses_of(const TermStore& store, const KnowledgeBase& kb);

// Naive bottom-up fixpoint: every round joins every rule against every known
// fact until nothing new appears. Returns all ground atoms, facts included,
// as canonical text.
std::set<std::string> naive_fixpoint(const std::vector<TreeClause>& clauses);

struct BfsPlanResult {
  bool solved = false;
  // Some branch was cut by the depth or state budget.
  bool truncated = false;
  std::vector<std::string> plan;
};

// Breadth-first search over explicit state sets; the first plan found is a
// shortest one.
BfsPlanResult bfs_plan(const TermStore& store, const PlanningDomain& domain, const PlanningProblem& problem,
                       std::size_t max_depth, std::size_t max_states = 1'000'000);

// Edge list with integer node and label ids.
struct LabeledEdges {
  std::uint32_t nodes = 0;
  std::uint32_t labels = 0;
  // (source, label, target)
  std::vector<std::array<std::uint32_t, 3>> edges;
};

// Targets reachable from `source` by one or more `label` edges, ascending.
std::vector<std::uint32_t> reachable(const LabeledEdges& g, std::uint32_t source, std::uint32_t label);

}  // namespace ru::oracle
