#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "ru/knowledge/knowledge_base.hpp"

namespace ru {

class DatalogError : public std::invalid_argument {
public:
  DatalogError(ClauseId clause, const std::string& message)
      : std::invalid_argument("clause " + std::to_string(clause) + ": " + message), clause_(clause) {}
  ClauseId clause() const { return clause_; }

private:
  ClauseId clause_;
};

struct ForwardLimits {
  std::uint64_t max_steps = 50'000'000;
};

enum class ForwardStatus { Fixpoint, StepLimit };

struct ForwardResult {
  ForwardStatus status = ForwardStatus::Fixpoint;
  // New ground facts in derivation order; base facts are not repeated.
  std::vector<Term> derived;
  // Rule firings, duplicates included.
  std::uint64_t steps = 0;
  std::uint32_t rounds = 0;
};

// Throws DatalogError unless every clause is function-free, facts are
// ground, rules are range-restricted, and no body uses `!`.
void check_datalog(const TermStore& store, const KnowledgeBase& kb);

// Semi-naive bottom-up evaluation to fixpoint.
ForwardResult solve_forward(TermStore& store, const KnowledgeBase& kb, ForwardLimits limits = {},
                            const std::function<void(Term)>& on_derived = {});

}  // namespace ru
