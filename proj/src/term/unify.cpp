#include "ru/term/unify.hpp"

#include <unordered_set>
#include <utility>

namespace ru {

bool occurs_in(const TermStore& store, Term var, Term t, const Bindings& b, std::vector<Term>* touched) {
  std::vector<Term> stack{t};
  while (!stack.empty()) {
    Term cur = b.deref(store, stack.back());
    stack.pop_back();
    if (touched) touched->push_back(cur);
    if (cur == var) return true;
    if (store.is_ground(cur) || !store.is_compound(cur)) continue;
    for (Term a : store.args(cur)) stack.push_back(a);
  }
  return false;
}

UnifyStatus unify(const TermStore& store, Term x0, Term y0, Bindings& b, UnifyStats* stats,
                  const UnifyOptions& options) {
  const Bindings::Mark mark = b.mark();
  std::uint64_t comparisons = 0;
  std::vector<std::pair<Term, Term>> work{{x0, y0}};
  UnifyStatus status = UnifyStatus::Success;

  while (!work.empty()) {
    auto [x, y] = work.back();
    work.pop_back();
    x = b.deref(store, x);
    y = b.deref(store, y);
    if (++comparisons > options.max_comparisons) {
      status = UnifyStatus::ResourceLimit;
      break;
    }
    if (options.touched) {
      options.touched->push_back(x);
      if (y != x) options.touched->push_back(y);
    }
    if (x == y) continue;
    if (store.is_variable(x)) {
      if (occurs_in(store, x, y, b)) {
        status = UnifyStatus::Failure;
        break;
      }
      b.bind(x, y);
      continue;
    }
    if (store.is_variable(y)) {
      if (occurs_in(store, y, x, b)) {
        status = UnifyStatus::Failure;
        break;
      }
      b.bind(y, x);
      continue;
    }
    // Hash-consing makes distinct constants distinct handles.
    if (!store.is_compound(x) || !store.is_compound(y) || store.symbol(x) != store.symbol(y) ||
        store.arity(x) != store.arity(y)) {
      status = UnifyStatus::Failure;
      break;
    }
    auto xs = store.args(x);
    auto ys = store.args(y);
    for (std::size_t i = xs.size(); i-- > 0;) work.emplace_back(xs[i], ys[i]);
  }

  if (stats) stats->comparisons += comparisons;
  if (status != UnifyStatus::Success) b.undo_to(mark);
  return status;
}

Term apply_bindings(TermStore& store, Term t, const Bindings& b) {
  if (store.is_ground(t) || b.empty()) return t;
  if (store.is_variable(t)) {
    Term d = b.deref(store, t);
    if (d == t) return t;
    return apply_bindings(store, d, b);
  }
  if (!store.is_compound(t)) return t;
  const auto arity = store.arity(t);
  std::vector<Term> args;
  args.reserve(arity);
  bool changed = false;
  for (std::uint32_t i = 0; i < arity; ++i) {
    Term a = store.arg(t, i);
    Term r = apply_bindings(store, a, b);
    changed = changed || r != a;
    args.push_back(r);
  }
  if (!changed) return t;
  return store.compound(store.symbol(t), args);
}

void collect_cells(const TermStore& store, Term t, std::vector<Term>& out) {
  std::vector<Term> stack{t};
  while (!stack.empty()) {
    Term cur = stack.back();
    stack.pop_back();
    out.push_back(cur);
    if (store.is_compound(cur)) {
      auto args = store.args(cur);
      for (std::size_t i = args.size(); i-- > 0;) stack.push_back(args[i]);
    }
  }
}

std::vector<Term> term_variables(const TermStore& store, Term t) {
  std::vector<Term> out;
  std::unordered_set<Term> seen;
  std::vector<Term> stack{t};
  while (!stack.empty()) {
    Term cur = stack.back();
    stack.pop_back();
    if (store.is_ground(cur)) continue;
    if (store.is_variable(cur)) {
      if (seen.insert(cur).second) out.push_back(cur);
      continue;
    }
    auto args = store.args(cur);
    for (std::size_t i = args.size(); i-- > 0;) stack.push_back(args[i]);
  }
  return out;
}

}  // namespace ru
