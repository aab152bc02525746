#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "ru/term/bindings.hpp"
#include "ru/term/term.hpp"

namespace ru {

enum class UnifyStatus { Success, Failure, ResourceLimit };

struct UnifyOptions {
  // Maximum number of node-pair comparisons before giving up.
  std::uint64_t max_comparisons = std::numeric_limits<std::uint64_t>::max();
  // When set, every dereferenced node visited is appended (for cache charging).
  std::vector<Term>* touched = nullptr;
};

struct UnifyStats {
  std::uint64_t comparisons = 0;
};

// Most general unifier with occurs-check. On Success `b` is extended; on any
// other outcome `b` is restored to its state on entry.
UnifyStatus unify(const TermStore& store, Term a, Term b_term, Bindings& b, UnifyStats* stats = nullptr,
                  const UnifyOptions& options = {});

// True when `var` occurs in `t` under `b`.
bool occurs_in(const TermStore& store, Term var, Term t, const Bindings& b, std::vector<Term>* touched = nullptr);

// Replace every bound variable by its fully dereferenced value.
Term apply_bindings(TermStore& store, Term t, const Bindings& b);

inline std::uint64_t term_cells(const TermStore& store, Term t) { return store.cells(t); }

// Append every node of `t` in tree order (one entry per cell).
void collect_cells(const TermStore& store, Term t, std::vector<Term>& out);

// Variables of `t` in first-occurrence order, without duplicates.
std::vector<Term> term_variables(const TermStore& store, Term t);

}  // namespace ru
