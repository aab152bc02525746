#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "ru/term/term.hpp"

namespace ru {

using ClauseId = std::uint32_t;

struct Clause {
  Term head;
  std::vector<Term> body;
  ClauseId id = 0;
  bool ground = false;
  PredicateKey key;
  // Indexed first argument; invalid when it is not a constant.
  Term first_constant;

  bool is_fact() const { return body.empty(); }
};

class KnowledgeError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Horn clauses indexed by head functor/arity, in assertion order, with a
// first-argument index for constant first arguments.
class KnowledgeBase {
public:
  // Throws KnowledgeError when the head is not an atom or compound.
  ClauseId assert_clause(const TermStore& store, Term head, std::vector<Term> body = {});
  bool retract_clause(ClauseId id);

  const Clause* find(ClauseId id) const;
  const Clause& clause(ClauseId id) const { return *clauses_[id]; }

  // Live clauses for the predicate, in assertion order.
  std::span<const ClauseId> lookup(PredicateKey key) const;
  // Candidates for a goal whose first argument dereferences to `first_arg`.
  // Constants narrow the set through the first-argument index; anything else
  // returns lookup(key). Assertion order is preserved either way.
  std::vector<ClauseId> candidates(const TermStore& store, PredicateKey key, std::optional<Term> first_arg) const;

  std::size_t size() const { return live_; }
  // Predicates in order of first assertion.
  const std::vector<PredicateKey>& predicates() const { return predicate_order_; }
  // All live clauses in assertion order.
  std::vector<const Clause*> clauses() const;

private:
  struct PredicateIndex {
    std::vector<ClauseId> all;
    std::unordered_map<Term, std::vector<ClauseId>> by_first;
    std::vector<ClauseId> open_first;
  };

  std::vector<std::optional<Clause>> clauses_;
  std::unordered_map<PredicateKey, PredicateIndex> index_;
  std::vector<PredicateKey> predicate_order_;
  std::size_t live_ = 0;
};

}  // namespace ru
