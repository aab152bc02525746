#include "ru/knowledge/forward.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "ru/term/unify.hpp"

namespace ru {
namespace {

struct Relation {
  std::vector<Term> tuples;
  std::unordered_map<Term, std::vector<std::uint32_t>> by_first;
  // Current round: tuples [0, old) are old, [old, all) are the delta.
  std::uint32_t old = 0;
  std::uint32_t all = 0;
};

struct Evaluator {
  TermStore& store;
  ForwardLimits limits;
  const std::function<void(Term)>& on_derived;
  std::unordered_map<PredicateKey, Relation> relations;
  std::unordered_set<Term> known;
  ForwardResult result;
  Bindings b;

  bool add(Term fact, bool base) {
    if (!known.insert(fact).second) return false;
    Relation& rel = relations[store.predicate(fact)];
    const auto pos = static_cast<std::uint32_t>(rel.tuples.size());
    rel.tuples.push_back(fact);
    if (store.arity(fact) > 0) rel.by_first[store.arg(fact, 0)].push_back(pos);
    if (!base) {
      result.derived.push_back(fact);
      if (on_derived) on_derived(fact);
    }
    return true;
  }

  // Tuple range visible to body position `j` when position `delta` reads the delta.
  static std::pair<std::uint32_t, std::uint32_t> range(const Relation& rel, std::size_t j, std::size_t delta) {
    if (j < delta) return {0, rel.old};
    if (j == delta) return {rel.old, rel.all};
    return {0, rel.all};
  }

  // Returns false once the step budget is spent.
  bool join(const Clause& rule, std::size_t j, std::size_t delta) {
    if (j == rule.body.size()) {
      if (result.steps >= limits.max_steps) {
        result.status = ForwardStatus::StepLimit;
        return false;
      }
      ++result.steps;
      add(apply_bindings(store, rule.head, b), false);
      return true;
    }
    const Term goal = rule.body[j];
    auto it = relations.find(store.predicate(goal));
    if (it == relations.end()) return true;
    const Relation& rel = it->second;
    auto [lo, hi] = range(rel, j, delta);
    if (lo >= hi) return true;

    auto try_tuple = [&](std::uint32_t pos) {
      const auto mark = b.mark();
      bool ok = true;
      if (unify(store, goal, rel.tuples[pos], b) == UnifyStatus::Success) ok = join(rule, j + 1, delta);
      b.undo_to(mark);
      return ok;
    };

    if (store.arity(goal) > 0) {
      const Term first = b.deref(store, store.arg(goal, 0));
      if (!store.is_variable(first)) {
        auto hit = rel.by_first.find(first);
        if (hit == rel.by_first.end()) return true;
        const auto& positions = hit->second;
        // Indexed access: recursive rules may append to `positions` meanwhile.
        std::size_t k = std::lower_bound(positions.begin(), positions.end(), lo) - positions.begin();
        for (; k < positions.size() && positions[k] < hi; ++k) {
          if (!try_tuple(positions[k])) return false;
        }
        return true;
      }
    }
    for (std::uint32_t pos = lo; pos < hi; ++pos) {
      if (!try_tuple(pos)) return false;
    }
    return true;
  }
};

bool function_free(const TermStore& store, Term t) {
  if (!store.is_compound(t)) return true;
  for (Term a : store.args(t)) {
    if (store.is_compound(a)) return false;
  }
  return true;
}

}  // namespace

void check_datalog(const TermStore& store, const KnowledgeBase& kb) {
  for (const Clause* c : kb.clauses()) {
    if (!function_free(store, c->head)) throw DatalogError(c->id, "compound argument in head");
    if (c->is_fact()) {
      if (!store.is_ground(c->head)) throw DatalogError(c->id, "fact is not ground");
      continue;
    }
    std::unordered_set<Term> body_vars;
    for (Term g : c->body) {
      if (store.is_atom(g) && store.symbol_name(store.symbol(g)) == "!") {
        throw DatalogError(c->id, "cut is not allowed in forward rules");
      }
      if (!function_free(store, g)) throw DatalogError(c->id, "compound argument in body goal");
      for (Term v : term_variables(store, g)) body_vars.insert(v);
    }
    for (Term v : term_variables(store, c->head)) {
      if (!body_vars.count(v)) {
        throw DatalogError(c->id, "head variable " + std::string(store.symbol_name(store.symbol(v))) +
                                      " does not occur in the body");
      }
    }
  }
}

ForwardResult solve_forward(TermStore& store, const KnowledgeBase& kb, ForwardLimits limits,
                            const std::function<void(Term)>& on_derived) {
  check_datalog(store, kb);
  Evaluator ev{store, limits, on_derived, {}, {}, {}, {}};
  std::vector<const Clause*> rules;
  for (const Clause* c : kb.clauses()) {
    if (c->is_fact()) {
      ev.add(c->head, true);
    } else {
      rules.push_back(c);
    }
  }

  while (true) {
    bool any_delta = false;
    for (auto& [key, rel] : ev.relations) {
      rel.old = rel.all;
      rel.all = static_cast<std::uint32_t>(rel.tuples.size());
      any_delta = any_delta || rel.all > rel.old;
    }
    if (!any_delta) break;
    ++ev.result.rounds;
    for (const Clause* rule : rules) {
      for (std::size_t d = 0; d < rule->body.size(); ++d) {
        auto it = ev.relations.find(store.predicate(rule->body[d]));
        if (it == ev.relations.end() || it->second.all == it->second.old) continue;
        if (!ev.join(*rule, 0, d)) return std::move(ev.result);
      }
    }
  }
  return std::move(ev.result);
}

}  // namespace ru
