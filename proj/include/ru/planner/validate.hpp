#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ru/planner/domain.hpp"

namespace ru {

struct ValidationResult {
  bool valid = false;
  // Index of the first failing step; equals the plan length when every step
  // applies but the goal does not hold at the end.
  std::optional<std::size_t> failed_step;
  // Unmet preconditions of the failing step, or unmet goal literals.
  std::vector<Term> missing;
  std::string reason;
};

// Simulates the plan step by step over explicit literal sets. Shares no code
// with grounding or search.
ValidationResult validate_plan(TermStore& store, const PlanningDomain& domain, const PlanningProblem& problem,
                               std::span<const Term> steps);

}  // namespace ru
