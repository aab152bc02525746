#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "ru/planner/grounding.hpp"

namespace ru {

enum class Heuristic { HMax, GoalCount };
enum class PlanStatus { Solved, Unsolvable, BudgetExceeded };

const char* to_string(PlanStatus s);

struct PlanConfig {
  Heuristic heuristic = Heuristic::HMax;
  std::uint64_t max_expansions = 200'000;
};

struct Plan {
  std::vector<Term> steps;
  std::uint64_t expansions = 0;

  std::size_t cost() const { return steps.size(); }
};

struct PlanResult {
  PlanStatus status = PlanStatus::Unsolvable;
  Plan plan;
  std::uint64_t generated = 0;
};

inline constexpr std::uint32_t kHInfinity = std::numeric_limits<std::uint32_t>::max();

using StateBits = std::vector<std::uint64_t>;

// Delete-relaxation max-cost heuristic; kHInfinity when some goal fact is
// unreachable even with deletes ignored.
std::uint32_t hmax(const GroundTask& task, const StateBits& state);
std::uint32_t goal_count(const GroundTask& task, const StateBits& state);

// hmax at the problem's initial state.
std::uint32_t hmax(TermStore& store, const PlanningDomain& domain, const PlanningProblem& problem);

// A* over ground states. Ties on f go to the lower h, then to the earlier
// insertion.
PlanResult plan(TermStore& store, const PlanningDomain& domain, const PlanningProblem& problem,
                const PlanConfig& config = {});
PlanResult plan(const GroundTask& task, const PlanConfig& config = {});

}  // namespace ru
