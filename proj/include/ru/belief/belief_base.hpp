#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ru/term/bindings.hpp"
#include "ru/term/term.hpp"

namespace ru {

enum class ProvenanceKind : std::uint8_t { Perceived, Inferred, Told, Neural };

struct Provenance {
  ProvenanceKind kind = ProvenanceKind::Perceived;
  // Sender for Told.
  std::uint32_t agent = 0;

  static Provenance perceived() { return {ProvenanceKind::Perceived, 0}; }
  static Provenance inferred() { return {ProvenanceKind::Inferred, 0}; }
  static Provenance told(std::uint32_t agent) { return {ProvenanceKind::Told, agent}; }
  static Provenance neural() { return {ProvenanceKind::Neural, 0}; }

  std::string to_string() const;
  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct Belief {
  Term content;
  double confidence = 1.0;
  Provenance provenance;
  std::uint64_t timestamp = 0;
  bool ground = true;

  friend bool operator==(const Belief&, const Belief&) = default;
};

enum class BeliefOutcome { Accepted, Revised, Rejected };

const char* to_string(BeliefOutcome o);

struct ConflictRecord {
  Belief kept;
  Belief discarded;
  std::uint64_t cycle = 0;

  friend bool operator==(const ConflictRecord&, const ConflictRecord&) = default;
};

struct BelieveResult {
  BeliefOutcome outcome = BeliefOutcome::Accepted;
  // Existing beliefs compared against the candidate for contradiction.
  std::uint64_t scanned = 0;
};

class BeliefError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// not(not(X)) -> X, applied at the top of the term until it no longer matches.
Term normalize_negation(const TermStore& store, Term t);

// Confidence-weighted belief store. Only ground complements, `x` against
// `not(x)`, count as contradictions. On conflict the higher confidence stays;
// on equal confidence the incoming belief wins unless it is older.
class BeliefBase {
public:
  // Throws BeliefError when confidence is outside [0, 1].
  BelieveResult believe(TermStore& store, Term content, double confidence, Provenance provenance,
                        std::uint64_t now);

  std::optional<Belief> detect_contradiction(const TermStore& store, Term candidate) const;

  // Beliefs whose content unifies with `pattern`: by confidence, then most
  // recent first, then insertion.
  std::vector<std::pair<Belief, Bindings>> query(TermStore& store, Term pattern) const;

  std::optional<Belief> find(const TermStore& store, Term content) const;
  bool retract(const TermStore& store, Term content);

  // Ground beliefs not wrapped in not/1, in insertion order.
  std::vector<Term> positive_ground(const TermStore& store) const;
  std::vector<Belief> beliefs() const;
  const std::vector<ConflictRecord>& conflicts() const { return conflicts_; }
  std::size_t size() const { return by_content_.size(); }
  // Bumped by every change to the stored beliefs.
  std::uint64_t version() const { return version_; }

  // One JSON object per line: content, confidence, provenance, cycle.
  std::string dump_jsonl(const TermStore& store) const;

  friend bool operator==(const BeliefBase&, const BeliefBase&) = default;

private:
  std::uint32_t insert(const TermStore& store, const Belief& b);
  void erase(const TermStore& store, std::uint32_t slot);
  PredicateKey core_key(const TermStore& store, Term t) const;
  std::optional<std::uint32_t> complement_slot(const TermStore& store, Term normalized) const;

  std::vector<std::optional<Belief>> slots_;
  std::unordered_map<Term, std::uint32_t> by_content_;
  std::unordered_map<PredicateKey, std::vector<std::uint32_t>> by_key_;
  std::vector<ConflictRecord> conflicts_;
  std::uint64_t version_ = 0;
};

}  // namespace ru
