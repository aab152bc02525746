#include "ru/knowledge/knowledge_base.hpp"

#include <algorithm>

namespace ru {
namespace {

void erase_id(std::vector<ClauseId>& v, ClauseId id) {
  auto it = std::lower_bound(v.begin(), v.end(), id);
  if (it != v.end() && *it == id) v.erase(it);
}

}  // namespace

ClauseId KnowledgeBase::assert_clause(const TermStore& store, Term head, std::vector<Term> body) {
  if (!head.valid() || !store.is_callable(head)) {
    throw KnowledgeError("clause head must be an atom or compound term");
  }
  for (Term g : body) {
    if (!g.valid() || !store.is_callable(g)) throw KnowledgeError("clause body goals must be atoms or compound terms");
  }
  const auto id = static_cast<ClauseId>(clauses_.size());
  bool ground = store.is_ground(head);
  for (Term g : body) ground = ground && store.is_ground(g);
  const PredicateKey key = store.predicate(head);
  Term first;
  if (store.arity(head) > 0 && store.is_constant(store.arg(head, 0))) first = store.arg(head, 0);
  clauses_.push_back(Clause{head, std::move(body), id, ground, key, first});
  ++live_;

  auto [it, inserted] = index_.try_emplace(key);
  if (inserted) predicate_order_.push_back(key);
  PredicateIndex& idx = it->second;
  idx.all.push_back(id);
  if (first.valid()) {
    idx.by_first[first].push_back(id);
  } else {
    idx.open_first.push_back(id);
  }
  return id;
}

bool KnowledgeBase::retract_clause(ClauseId id) {
  if (id >= clauses_.size() || !clauses_[id]) return false;
  const Clause& c = *clauses_[id];
  PredicateIndex& idx = index_.at(c.key);
  erase_id(idx.all, id);
  if (c.first_constant.valid()) {
    erase_id(idx.by_first[c.first_constant], id);
  } else {
    erase_id(idx.open_first, id);
  }
  clauses_[id].reset();
  --live_;
  return true;
}

const Clause* KnowledgeBase::find(ClauseId id) const {
  if (id >= clauses_.size() || !clauses_[id]) return nullptr;
  return &*clauses_[id];
}

std::span<const ClauseId> KnowledgeBase::lookup(PredicateKey key) const {
  auto it = index_.find(key);
  if (it == index_.end()) return {};
  return it->second.all;
}

std::vector<ClauseId> KnowledgeBase::candidates(const TermStore& store, PredicateKey key,
                                                std::optional<Term> first_arg) const {
  auto it = index_.find(key);
  if (it == index_.end()) return {};
  const PredicateIndex& idx = it->second;
  if (!first_arg || !store.is_constant(*first_arg)) return idx.all;
  std::vector<ClauseId> out;
  auto hit = idx.by_first.find(*first_arg);
  if (hit == idx.by_first.end()) return idx.open_first;
  out.reserve(hit->second.size() + idx.open_first.size());
  std::merge(hit->second.begin(), hit->second.end(), idx.open_first.begin(), idx.open_first.end(),
             std::back_inserter(out));
  return out;
}

std::vector<const Clause*> KnowledgeBase::clauses() const {
  std::vector<const Clause*> out;
  out.reserve(live_);
  for (const auto& c : clauses_) {
    if (c) out.push_back(&*c);
  }
  return out;
}

}  // namespace ru
