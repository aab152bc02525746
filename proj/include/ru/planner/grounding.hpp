#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "ru/planner/domain.hpp"

namespace ru {

using FactId = std::uint32_t;

struct GroundAction {
  Term name;
  std::vector<FactId> pre;
  std::vector<FactId> add;
  std::vector<FactId> del;
};

// Propositional form of a problem. Only actions reachable under the delete
// relaxation from the initial state are kept.
struct GroundTask {
  std::vector<Term> facts;
  std::unordered_map<Term, FactId> fact_ids;
  std::vector<GroundAction> actions;
  std::vector<FactId> init;
  std::vector<FactId> goal;
  // A goal literal that no reachable action adds and init lacks.
  bool goal_unreachable = false;

  std::size_t words() const { return (facts.size() + 63) / 64; }
};

// Instantiates each schema over objects^k. Throws PlanningError on malformed
// input.
GroundTask ground(TermStore& store, const PlanningDomain& domain, const PlanningProblem& problem);

}  // namespace ru
