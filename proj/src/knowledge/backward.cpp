#include "ru/knowledge/backward.hpp"

#include <stdexcept>

#include "ru/term/unify.hpp"

namespace ru {
namespace {

// Maps clause variables to fresh ones; linear lookup is fine for the handful
// of variables a clause has.
struct Renamer {
  TermStore& store;
  std::vector<std::pair<Term, Term>> map;

  Term operator()(Term t) {
    if (store.is_ground(t)) return t;
    if (store.is_variable(t)) {
      for (const auto& [from, to] : map) {
        if (from == t) return to;
      }
      Term fresh = store.fresh_variable(store.symbol(t));
      map.emplace_back(t, fresh);
      return fresh;
    }
    const std::uint32_t n = store.arity(t);
    std::vector<Term> args;
    args.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) args.push_back((*this)(store.arg(t, i)));
    return store.compound(store.symbol(t), args);
  }
};

bool is_named(const TermStore& store, Term t, std::string_view name, std::uint32_t arity) {
  return store.is_callable(t) && store.arity(t) == arity && store.symbol_name(store.symbol(t)) == name;
}

}  // namespace

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Solution: return "solution";
    case SolveStatus::Exhausted: return "exhausted";
    case SolveStatus::StepLimit: return "step_limit";
    case SolveStatus::DepthLimit: return "depth_limit";
  }
  return "?";
}

RenamedClause rename_clause(TermStore& store, const Clause& c) {
  Renamer r{store, {}};
  RenamedClause out{r(c.head), {}};
  for (Term g : c.body) out.body.push_back(r(g));
  return out;
}

void SldEngine::start(Term goal, SolveLimits limits) {
  *this = SldEngine{};
  goal_ = goal;
  limits_ = limits;
  cells_.push_back(GoalCell{goal, kNil, 0, 0});
  current_ = 0;
}

SolveStatus SldEngine::finish(SolveStatus s) {
  finished_ = true;
  last_ = s;
  bindings_.clear();
  cells_.clear();
  choices_.clear();
  clause_pool_.clear();
  fact_pool_.clear();
  current_ = kNil;
  return s;
}

bool SldEngine::charge_step() {
  if (steps_ >= limits_.max_steps) {
    step_limit_ = true;
    return false;
  }
  ++steps_;
  return true;
}

SolveStatus SldEngine::next(TermStore& store, const KnowledgeBase& kb, const SemanticGraph* graph,
                            std::vector<Term>* touched) {
  if (!started()) throw std::logic_error("SldEngine::next called before start");
  if (finished_) return last_;

  auto failed = [&] {
    if (step_limit_) return finish(SolveStatus::StepLimit);
    return finish(depth_cut_ ? SolveStatus::DepthLimit : SolveStatus::Exhausted);
  };

  if (pending_retry_) {
    pending_retry_ = false;
    if (!backtrack(store, kb, touched)) return failed();
  }
  while (true) {
    if (current_ == kNil) {
      answer_ = apply_bindings(store, goal_, bindings_);
      pending_retry_ = true;
      last_ = SolveStatus::Solution;
      return last_;
    }
    if (!call(store, kb, graph, touched)) {
      if (step_limit_ || !backtrack(store, kb, touched)) return failed();
    }
  }
}

bool SldEngine::call(TermStore& store, const KnowledgeBase& kb, const SemanticGraph* graph,
                     std::vector<Term>* touched) {
  const GoalCell cell = cells_[current_];
  const Term goal = bindings_.deref(store, cell.goal);
  if (!store.is_callable(goal)) return false;

  if (is_named(store, goal, "!", 0)) {
    while (choices_.size() > cell.cut_barrier) {
      const ChoicePoint& cp = choices_.back();
      if (cp.kind == AltKind::Clauses) {
        clause_pool_.resize(cp.begin);
      } else {
        fact_pool_.resize(std::size_t{cp.begin} * 3);
      }
      choices_.pop_back();
    }
    current_ = cell.next;
    return true;
  }
  if (is_named(store, goal, "true", 0)) {
    current_ = cell.next;
    return true;
  }
  if (cell.depth >= limits_.max_depth) {
    depth_cut_ = true;
    return false;
  }

  const auto barrier = static_cast<std::uint32_t>(choices_.size());
  const bool closure = is_named(store, goal, "reach", 3);
  if (graph && (closure || is_named(store, goal, "edge", 3))) {
    const auto begin = static_cast<std::uint32_t>(fact_pool_.size() / 3);
    graph_answers(store, *graph, goal, closure);
    const auto end = static_cast<std::uint32_t>(fact_pool_.size() / 3);
    if (cell.depth == 0) root_alts_.assign(1, kBuiltin);
    if (begin == end) return false;
    choices_.push_back(ChoicePoint{current_, AltKind::Facts, begin, end, begin, bindings_.mark(),
                                   static_cast<std::uint32_t>(cells_.size()), barrier});
  } else {
    std::optional<Term> first;
    if (store.arity(goal) > 0) first = bindings_.deref(store, store.arg(goal, 0));
    std::vector<ClauseId> cands = kb.candidates(store, store.predicate(goal), first);
    if (cell.depth == 0) root_alts_ = cands;
    if (cands.empty()) return false;
    const auto begin = static_cast<std::uint32_t>(clause_pool_.size());
    clause_pool_.insert(clause_pool_.end(), cands.begin(), cands.end());
    choices_.push_back(ChoicePoint{current_, AltKind::Clauses, begin,
                                   static_cast<std::uint32_t>(clause_pool_.size()), begin, bindings_.mark(),
                                   static_cast<std::uint32_t>(cells_.size()), barrier});
  }
  return retry(store, kb, touched);
}

bool SldEngine::retry(TermStore& store, const KnowledgeBase& kb, std::vector<Term>* touched) {
  const std::size_t top = choices_.size() - 1;
  UnifyOptions options;
  options.touched = touched;

  while (choices_[top].cursor < choices_[top].end) {
    ChoicePoint& cp = choices_[top];
    const std::uint32_t idx = cp.cursor++;
    if (!charge_step()) return false;
    bindings_.undo_to(cp.trail);
    cells_.resize(cp.arena);
    const GoalCell cell = cells_[cp.cell];
    const bool last = cp.cursor == cp.end;
    const ChoicePoint saved = cp;

    UnifyStats stats;
    if (cp.kind == AltKind::Facts) {
      Term goal = bindings_.deref(store, cell.goal);
      bool ok = true;
      for (std::uint32_t i = 0; i < 3 && ok; ++i) {
        ok = unify(store, store.arg(goal, i), fact_pool_[std::size_t{idx} * 3 + i], bindings_, &stats, options) ==
             UnifyStatus::Success;
      }
      comparisons_ += stats.comparisons;
      if (!ok) {
        bindings_.undo_to(saved.trail);
        continue;
      }
      if (cell.depth == 0) root_choice_ = idx - saved.begin;
      if (last) {
        fact_pool_.resize(std::size_t{saved.begin} * 3);
        choices_.pop_back();
      }
      current_ = cell.next;
      return true;
    }

    const Clause& clause = kb.clause(clause_pool_[idx]);
    Renamer rename{store, {}};
    const Term head = clause.ground ? clause.head : rename(clause.head);
    const UnifyStatus st = unify(store, cell.goal, head, bindings_, &stats, options);
    comparisons_ += stats.comparisons;
    if (st != UnifyStatus::Success) continue;

    if (cell.depth == 0) root_choice_ = idx - saved.begin;
    if (last) {
      clause_pool_.resize(saved.begin);
      choices_.pop_back();
    }
    std::uint32_t next = cell.next;
    for (std::size_t i = clause.body.size(); i-- > 0;) {
      const Term g = clause.ground ? clause.body[i] : rename(clause.body[i]);
      cells_.push_back(GoalCell{g, next, saved.barrier, cell.depth + 1});
      next = static_cast<std::uint32_t>(cells_.size() - 1);
    }
    current_ = next;
    return true;
  }

  const ChoicePoint& cp = choices_[top];
  bindings_.undo_to(cp.trail);
  cells_.resize(cp.arena);
  if (cp.kind == AltKind::Clauses) {
    clause_pool_.resize(cp.begin);
  } else {
    fact_pool_.resize(std::size_t{cp.begin} * 3);
  }
  choices_.pop_back();
  return false;
}

bool SldEngine::backtrack(TermStore& store, const KnowledgeBase& kb, std::vector<Term>* touched) {
  while (!choices_.empty()) {
    if (retry(store, kb, touched)) return true;
    if (step_limit_) return false;
  }
  return false;
}

void SldEngine::graph_answers(const TermStore& store, const SemanticGraph& g, Term goal, bool closure) {
  const Term s = bindings_.deref(store, store.arg(goal, 0));
  const Term l = bindings_.deref(store, store.arg(goal, 1));
  const Term t = bindings_.deref(store, store.arg(goal, 2));
  const bool any_target = store.is_variable(t);

  std::vector<Term> sources;
  if (store.is_variable(s)) {
    sources = g.nodes();
  } else if (g.has_node(s)) {
    sources.push_back(s);
  }
  std::vector<Term> labels;
  if (store.is_variable(l)) {
    labels = g.labels();
  } else {
    labels.push_back(l);
  }

  auto emit = [&](Term src, Term label, Term dst) {
    if (!any_target && dst != t) return;
    fact_pool_.push_back(src);
    fact_pool_.push_back(label);
    fact_pool_.push_back(dst);
  };
  for (Term src : sources) {
    for (Term label : labels) {
      if (closure) {
        ClosureResult r = transitive_closure(g, label, src);
        steps_ += r.expanded;
        for (Term dst : r.nodes) emit(src, label, dst);
      } else {
        for (Term dst : g.successors(src, label)) emit(src, label, dst);
      }
    }
  }
}

Bindings SldEngine::answer_bindings(TermStore& store) const {
  Bindings out;
  if (last_ != SolveStatus::Solution || finished_) return out;
  for (Term v : term_variables(store, goal_)) {
    Term value = apply_bindings(store, v, bindings_);
    if (value != v) out.bind(v, value);
  }
  return out;
}

SolutionStream::SolutionStream(TermStore& store, const KnowledgeBase& kb, Term goal, SolveLimits limits,
                               const SemanticGraph* graph)
    : store_(store), kb_(kb), graph_(graph) {
  engine_.start(goal, limits);
}

std::optional<Term> SolutionStream::next() {
  if (engine_.next(store_, kb_, graph_) != SolveStatus::Solution) return std::nullopt;
  return engine_.answer();
}

std::vector<Term> SolutionStream::all() {
  std::vector<Term> out;
  while (auto t = next()) out.push_back(*t);
  return out;
}

SolutionStream solve_backward(TermStore& store, const KnowledgeBase& kb, Term goal, SolveLimits limits,
                              const SemanticGraph* graph) {
  return SolutionStream(store, kb, goal, limits, graph);
}

}  // namespace ru
