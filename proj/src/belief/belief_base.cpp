#include "ru/belief/belief_base.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "json.hpp"

#include "ru/term/unify.hpp"

namespace ru {
namespace {

bool is_not(const TermStore& store, Term t) {
  return store.is_compound(t) && store.arity(t) == 1 && store.symbol_name(store.symbol(t)) == "not";
}

Term rename_apart(TermStore& store, Term t, std::vector<std::pair<Term, Term>>& map) {
  if (store.is_ground(t)) return t;
  if (store.is_variable(t)) {
    for (const auto& [from, to] : map) {
      if (from == t) return to;
    }
    Term fresh = store.fresh_variable(store.symbol(t));
    map.emplace_back(t, fresh);
    return fresh;
  }
  std::vector<Term> args;
  for (std::uint32_t i = 0; i < store.arity(t); ++i) args.push_back(rename_apart(store, store.arg(t, i), map));
  return store.compound(store.symbol(t), args);
}

}  // namespace

std::string Provenance::to_string() const {
  switch (kind) {
    case ProvenanceKind::Perceived: return "perceived";
    case ProvenanceKind::Inferred: return "inferred";
    case ProvenanceKind::Told: return "told(" + std::to_string(agent) + ")";
    case ProvenanceKind::Neural: return "neural";
  }
  return "?";
}

const char* to_string(BeliefOutcome o) {
  switch (o) {
    case BeliefOutcome::Accepted: return "accepted";
    case BeliefOutcome::Revised: return "revised";
    case BeliefOutcome::Rejected: return "rejected";
  }
  return "?";
}

Term normalize_negation(const TermStore& store, Term t) {
  while (is_not(store, t) && is_not(store, store.arg(t, 0))) t = store.arg(store.arg(t, 0), 0);
  return t;
}

PredicateKey BeliefBase::core_key(const TermStore& store, Term t) const {
  while (is_not(store, t)) t = store.arg(t, 0);
  return store.predicate(t);
}

std::optional<std::uint32_t> BeliefBase::complement_slot(const TermStore& store, Term c) const {
  if (!store.is_ground(c)) return std::nullopt;
  std::optional<Term> comp;
  if (is_not(store, c)) {
    comp = store.arg(c, 0);
  } else if (auto sym = store.find_symbol("not")) {
    const Term arg[1] = {c};
    comp = store.find_compound(*sym, arg);
  }
  if (!comp) return std::nullopt;
  auto it = by_content_.find(*comp);
  if (it == by_content_.end()) return std::nullopt;
  return it->second;
}

std::uint32_t BeliefBase::insert(const TermStore& store, const Belief& b) {
  const auto slot = static_cast<std::uint32_t>(slots_.size());
  slots_.push_back(b);
  by_content_.emplace(b.content, slot);
  by_key_[core_key(store, b.content)].push_back(slot);
  ++version_;
  return slot;
}

void BeliefBase::erase(const TermStore& store, std::uint32_t slot) {
  const Term content = slots_[slot]->content;
  by_content_.erase(content);
  auto& v = by_key_[core_key(store, content)];
  v.erase(std::lower_bound(v.begin(), v.end(), slot));
  slots_[slot].reset();
  ++version_;
}

BelieveResult BeliefBase::believe(TermStore& store, Term content, double confidence, Provenance provenance,
                                  std::uint64_t now) {
  if (!(confidence >= 0.0 && confidence <= 1.0)) throw BeliefError("confidence must lie in [0, 1]");
  if (!content.valid() || store.is_variable(content)) throw BeliefError("belief content must not be a variable");
  const Term c = normalize_negation(store, content);
  Belief incoming{c, confidence, provenance, now, store.is_ground(c)};

  if (auto it = by_content_.find(c); it != by_content_.end()) {
    Belief& existing = *slots_[it->second];
    if (confidence >= existing.confidence) existing.provenance = provenance;
    existing.confidence = std::max(existing.confidence, confidence);
    existing.timestamp = now;
    ++version_;
    return {BeliefOutcome::Accepted, 0};
  }

  BelieveResult result;
  if (auto slot = complement_slot(store, c)) {
    result.scanned = 1;
    const Belief existing = *slots_[*slot];
    const bool incoming_wins = confidence > existing.confidence ||
                               (confidence == existing.confidence && now >= existing.timestamp);
    if (incoming_wins) {
      erase(store, *slot);
      insert(store, incoming);
      conflicts_.push_back(ConflictRecord{incoming, existing, now});
      result.outcome = BeliefOutcome::Revised;
    } else {
      conflicts_.push_back(ConflictRecord{existing, incoming, now});
      result.outcome = BeliefOutcome::Rejected;
    }
    return result;
  }
  insert(store, incoming);
  return result;
}

std::optional<Belief> BeliefBase::detect_contradiction(const TermStore& store, Term candidate) const {
  auto slot = complement_slot(store, normalize_negation(store, candidate));
  if (!slot) return std::nullopt;
  return *slots_[*slot];
}

std::optional<Belief> BeliefBase::find(const TermStore& store, Term content) const {
  auto it = by_content_.find(normalize_negation(store, content));
  if (it == by_content_.end()) return std::nullopt;
  return *slots_[it->second];
}

bool BeliefBase::retract(const TermStore& store, Term content) {
  auto it = by_content_.find(normalize_negation(store, content));
  if (it == by_content_.end()) return false;
  erase(store, it->second);
  return true;
}

std::vector<std::pair<Belief, Bindings>> BeliefBase::query(TermStore& store, Term pattern) const {
  std::vector<std::uint32_t> candidates;
  if (store.is_variable(pattern)) {
    for (std::uint32_t s = 0; s < slots_.size(); ++s) {
      if (slots_[s]) candidates.push_back(s);
    }
  } else if (auto it = by_key_.find(core_key(store, pattern)); it != by_key_.end()) {
    candidates = it->second;
  }

  std::vector<std::pair<std::uint32_t, Bindings>> hits;
  for (std::uint32_t s : candidates) {
    const Belief& b = *slots_[s];
    Term content = b.content;
    if (!b.ground) {
      std::vector<std::pair<Term, Term>> map;
      content = rename_apart(store, content, map);
    }
    Bindings bind;
    if (unify(store, pattern, content, bind) == UnifyStatus::Success) hits.emplace_back(s, std::move(bind));
  }
  std::stable_sort(hits.begin(), hits.end(), [&](const auto& x, const auto& y) {
    const Belief& a = *slots_[x.first];
    const Belief& b = *slots_[y.first];
    if (a.confidence != b.confidence) return a.confidence > b.confidence;
    if (a.timestamp != b.timestamp) return a.timestamp > b.timestamp;
    return x.first < y.first;
  });
  std::vector<std::pair<Belief, Bindings>> out;
  out.reserve(hits.size());
  for (auto& [s, bind] : hits) out.emplace_back(*slots_[s], std::move(bind));
  return out;
}

std::vector<Term> BeliefBase::positive_ground(const TermStore& store) const {
  std::vector<Term> out;
  for (const auto& b : slots_) {
    if (b && b->ground && !is_not(store, b->content)) out.push_back(b->content);
  }
  return out;
}

std::vector<Belief> BeliefBase::beliefs() const {
  std::vector<Belief> out;
  for (const auto& b : slots_) {
    if (b) out.push_back(*b);
  }
  return out;
}

std::string BeliefBase::dump_jsonl(const TermStore& store) const {
  std::ostringstream os;
  for (const auto& b : slots_) {
    if (!b) continue;
    nlohmann::json j;
    j["content"] = store.to_string(b->content);
    j["confidence"] = b->confidence;
    j["provenance"] = b->provenance.to_string();
    j["cycle"] = b->timestamp;
    os << j.dump() << '\n';
  }
  return os.str();
}

}  // namespace ru
