#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ru/term/term.hpp"

namespace ru {

class PlanningError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

struct OperatorSchema {
  // Head term, e.g. pickup(X); its arguments are the parameters.
  Term head;
  std::vector<Term> params;
  std::vector<Term> pre;
  std::vector<Term> add;
  std::vector<Term> del;
};

struct PlanningDomain {
  std::vector<OperatorSchema> operators;

  const OperatorSchema* find(const TermStore& store, SymbolId name, std::uint32_t arity) const;
};

struct PlanningProblem {
  std::vector<Term> objects;
  std::vector<Term> init;
  std::vector<Term> goal;
};

// Checks the schema invariants: parameters are distinct variables, effect
// variables are parameters, and add and delete lists are disjoint.
void check_domain(const TermStore& store, const PlanningDomain& domain);
// Throws PlanningError when init or goal are not ground.
void check_problem(const TermStore& store, const PlanningProblem& problem);

// `operator name(P1, ..., Pk) pre: l1, ... add: ... del: ...`, one schema
// per `operator` keyword; sections may be empty or omitted.
PlanningDomain parse_domain(TermStore& store, std::string_view text);
// Lines `object a, b`, `init l1, l2`, `goal g1, g2`; each may repeat.
PlanningProblem parse_problem(TermStore& store, std::string_view text);

PlanningDomain load_domain_file(TermStore& store, const std::string& path);
PlanningProblem load_problem_file(TermStore& store, const std::string& path);

}  // namespace ru
