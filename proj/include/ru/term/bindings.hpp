#pragma once

#include <cstddef>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ru/term/term.hpp"

namespace ru {

// Variable -> term map with an undo trail. Every bind() is recorded; undo_to()
// unwinds back to a mark and restores the exact prior map.
class Bindings {
public:
  using Mark = std::size_t;

  std::optional<Term> lookup(Term var) const {
    auto it = map_.find(var);
    if (it == map_.end()) return std::nullopt;
    return it->second;
  }

  void bind(Term var, Term value) {
    map_.emplace(var, value);
    trail_.push_back(var);
  }

  Mark mark() const { return trail_.size(); }
  void undo_to(Mark m);

  // Follow variable bindings until reaching a non-variable or unbound variable.
  Term deref(const TermStore& store, Term t) const;

  std::size_t size() const { return map_.size(); }
  bool empty() const { return map_.empty(); }
  void clear() {
    map_.clear();
    trail_.clear();
  }

  // Entries ordered by variable handle; a stable serialization of the map.
  std::vector<std::pair<Term, Term>> sorted_entries() const;

  const std::unordered_map<Term, Term>& map() const { return map_; }

  // Map equality; the trail is bookkeeping and does not participate.
  friend bool operator==(const Bindings& a, const Bindings& b) { return a.map_ == b.map_; }

private:
  std::unordered_map<Term, Term> map_;
  std::vector<Term> trail_;
};

}  // namespace ru
