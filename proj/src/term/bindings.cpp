#include "ru/term/bindings.hpp"

#include <algorithm>

namespace ru {

void Bindings::undo_to(Mark m) {
  while (trail_.size() > m) {
    map_.erase(trail_.back());
    trail_.pop_back();
  }
}

Term Bindings::deref(const TermStore& store, Term t) const {
  while (store.is_variable(t)) {
    auto it = map_.find(t);
    if (it == map_.end()) break;
    t = it->second;
  }
  return t;
}

std::vector<std::pair<Term, Term>> Bindings::sorted_entries() const {
  std::vector<std::pair<Term, Term>> out(map_.begin(), map_.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace ru
