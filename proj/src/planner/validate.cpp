#include "ru/planner/validate.hpp"

#include <set>

#include "ru/term/unify.hpp"

namespace ru {

ValidationResult validate_plan(TermStore& store, const PlanningDomain& domain, const PlanningProblem& problem,
                               std::span<const Term> steps) {
  ValidationResult out;
  std::set<Term> state(problem.init.begin(), problem.init.end());

  for (std::size_t k = 0; k < steps.size(); ++k) {
    const Term step = steps[k];
    const OperatorSchema* op =
        store.is_callable(step) ? domain.find(store, store.symbol(step), store.arity(step)) : nullptr;
    if (!op || !store.is_ground(step)) {
      out.failed_step = k;
      out.reason = "unknown or non-ground action " + store.to_string(step);
      return out;
    }
    Bindings b;
    if (unify(store, op->head, step, b) != UnifyStatus::Success) {
      out.failed_step = k;
      out.reason = "action does not match its schema";
      return out;
    }
    for (Term p : op->pre) {
      Term lit = apply_bindings(store, p, b);
      if (!state.count(lit)) out.missing.push_back(lit);
    }
    if (!out.missing.empty()) {
      out.failed_step = k;
      out.reason = "unmet preconditions";
      return out;
    }
    for (Term d : op->del) state.erase(apply_bindings(store, d, b));
    for (Term a : op->add) state.insert(apply_bindings(store, a, b));
  }

  for (Term g : problem.goal) {
    if (!state.count(g)) out.missing.push_back(g);
  }
  if (!out.missing.empty()) {
    out.failed_step = steps.size();
    out.reason = "goal not satisfied";
    return out;
  }
  out.valid = true;
  return out;
}

}  // namespace ru
