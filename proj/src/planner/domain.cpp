#include "ru/planner/domain.hpp"

#include <algorithm>
#include <unordered_set>

#include "ru/term/parser.hpp"
#include "ru/term/unify.hpp"
#include "ru/util/file.hpp"

namespace ru {

const OperatorSchema* PlanningDomain::find(const TermStore& store, SymbolId name, std::uint32_t arity) const {
  for (const auto& op : operators) {
    if (store.symbol(op.head) == name && store.arity(op.head) == arity) return &op;
  }
  return nullptr;
}

void check_domain(const TermStore& store, const PlanningDomain& domain) {
  for (const auto& op : domain.operators) {
    const std::string name(store.symbol_name(store.symbol(op.head)));
    std::unordered_set<Term> params;
    for (Term p : op.params) {
      if (!store.is_variable(p)) throw PlanningError("operator " + name + ": parameters must be variables");
      if (!params.insert(p).second) throw PlanningError("operator " + name + ": duplicate parameter");
    }
    auto check_vars = [&](const std::vector<Term>& lits, const char* what) {
      for (Term l : lits) {
        if (!store.is_callable(l)) throw PlanningError("operator " + name + ": " + what + " literal is not callable");
        for (Term v : term_variables(store, l)) {
          if (!params.count(v)) {
            throw PlanningError("operator " + name + ": variable " + std::string(store.symbol_name(store.symbol(v))) +
                                " in " + what + " is not a parameter");
          }
        }
      }
    };
    check_vars(op.pre, "pre");
    check_vars(op.add, "add");
    check_vars(op.del, "del");
    for (Term a : op.add) {
      if (std::find(op.del.begin(), op.del.end(), a) != op.del.end()) {
        throw PlanningError("operator " + name + ": " + store.to_string(a) + " is both added and deleted");
      }
    }
  }
}

void check_problem(const TermStore& store, const PlanningProblem& problem) {
  for (Term t : problem.objects) {
    if (!store.is_constant(t)) throw PlanningError("objects must be atoms or numbers");
  }
  for (Term t : problem.init) {
    if (!store.is_ground(t)) throw PlanningError("initial state literal " + store.to_string(t) + " is not ground");
  }
  for (Term t : problem.goal) {
    if (!store.is_ground(t)) throw PlanningError("goal literal " + store.to_string(t) + " is not ground");
  }
}

namespace {

bool at_keyword(TermReader& r) {
  return r.peek_identifier("operator") || r.peek_identifier("pre") || r.peek_identifier("add") ||
         r.peek_identifier("del");
}

std::vector<Term> read_section(TermReader& r, std::string_view name) {
  if (!r.peek_identifier(name)) return {};
  r.accept(name);
  r.expect(":");
  if (r.at_end() || at_keyword(r)) return {};
  return r.read_term_list();
}

}  // namespace

PlanningDomain parse_domain(TermStore& store, std::string_view text) {
  TermReader r(store, text);
  PlanningDomain domain;
  while (!r.at_end()) {
    if (!r.accept("operator")) r.fail("expected 'operator'");
    OperatorSchema op;
    op.head = r.read_term();
    if (!store.is_callable(op.head)) r.fail("operator name must be an atom or compound term");
    if (store.is_compound(op.head)) {
      auto args = store.args(op.head);
      op.params.assign(args.begin(), args.end());
    }
    op.pre = read_section(r, "pre");
    op.add = read_section(r, "add");
    op.del = read_section(r, "del");
    r.accept(".");
    domain.operators.push_back(std::move(op));
  }
  check_domain(store, domain);
  return domain;
}

PlanningProblem parse_problem(TermStore& store, std::string_view text) {
  TermReader r(store, text);
  PlanningProblem p;
  auto append = [&](std::vector<Term>& to) {
    r.accept(":");
    auto list = r.read_term_list();
    to.insert(to.end(), list.begin(), list.end());
    r.accept(".");
  };
  while (!r.at_end()) {
    if (r.accept("objects") || r.accept("object")) {
      append(p.objects);
    } else if (r.accept("init")) {
      append(p.init);
    } else if (r.accept("goal")) {
      append(p.goal);
    } else {
      r.fail("expected 'object', 'init' or 'goal'");
    }
  }
  check_problem(store, p);
  return p;
}

PlanningDomain load_domain_file(TermStore& store, const std::string& path) {
  return parse_domain(store, read_text_file(path));
}

PlanningProblem load_problem_file(TermStore& store, const std::string& path) {
  return parse_problem(store, read_text_file(path));
}

}  // namespace ru
