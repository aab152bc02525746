#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ru/knowledge/knowledge_base.hpp"
#include "ru/knowledge/semantic_graph.hpp"
#include "ru/term/bindings.hpp"
#include "ru/term/term.hpp"

namespace ru {

struct SolveLimits {
  std::uint64_t max_steps = 1'000'000;
  std::uint32_t max_depth = 10'000;
};

enum class SolveStatus { Solution, Exhausted, StepLimit, DepthLimit };

const char* to_string(SolveStatus s);

// Resumable SLD resolution: leftmost goal, clauses in assertion order,
// chronological backtracking, and `!`. The engine is a plain value (no
// pointers into the store or KB), so copying it snapshots the whole search.
//
// With a graph attached, `edge(S, L, T)` and `reach(S, L, T)` are answered
// from the graph instead of the KB. `reach` is one-or-more steps.
//
// A step is one attempt to resolve a goal against a clause head or a graph
// answer; `reach` also charges one step per node it expands.
class SldEngine {
public:
  // Sentinel clause id reported for goals answered by a built-in.
  static constexpr ClauseId kBuiltin = UINT32_MAX;

  void start(Term goal, SolveLimits limits = {});
  SolveStatus next(TermStore& store, const KnowledgeBase& kb, const SemanticGraph* graph = nullptr,
                   std::vector<Term>* touched = nullptr);

  bool started() const { return goal_.valid(); }
  // True once next() has returned anything but Solution.
  bool finished() const { return finished_; }
  SolveStatus last_status() const { return last_; }
  Term goal() const { return goal_; }
  // The goal instantiated by the most recent solution.
  Term answer() const { return answer_; }
  // Bindings of the query's own variables in the most recent solution.
  Bindings answer_bindings(TermStore& store) const;
  const Bindings& bindings() const { return bindings_; }

  std::uint64_t steps() const { return steps_; }
  std::uint64_t comparisons() const { return comparisons_; }
  std::size_t open_choice_points() const { return choices_.size(); }
  std::size_t goal_cells() const { return cells_.size(); }

  // Alternatives for the query goal itself, and which one the current
  // solution came through. Feeds the clause predictor.
  const std::vector<ClauseId>& root_alternatives() const { return root_alts_; }
  std::optional<std::size_t> root_choice() const { return root_choice_; }

private:
  static constexpr std::uint32_t kNil = UINT32_MAX;

  struct GoalCell {
    Term goal;
    std::uint32_t next;
    std::uint32_t cut_barrier;
    std::uint32_t depth;
  };

  enum class AltKind : std::uint8_t { Clauses, Facts };

  struct ChoicePoint {
    std::uint32_t cell;
    AltKind kind;
    std::uint32_t begin;
    std::uint32_t end;
    std::uint32_t cursor;
    Bindings::Mark trail;
    std::uint32_t arena;
    std::uint32_t barrier;
  };

  bool call(TermStore& store, const KnowledgeBase& kb, const SemanticGraph* graph, std::vector<Term>* touched);
  bool retry(TermStore& store, const KnowledgeBase& kb, std::vector<Term>* touched);
  bool backtrack(TermStore& store, const KnowledgeBase& kb, std::vector<Term>* touched);
  void graph_answers(const TermStore& store, const SemanticGraph& g, Term goal, bool closure);
  bool charge_step();
  SolveStatus finish(SolveStatus s);

  Term goal_;
  Term answer_;
  SolveLimits limits_;
  Bindings bindings_;
  std::vector<GoalCell> cells_;
  std::vector<ChoicePoint> choices_;
  std::vector<ClauseId> clause_pool_;
  // Ground answer triples for built-ins, three terms per alternative.
  std::vector<Term> fact_pool_;
  std::uint32_t current_ = kNil;
  std::uint64_t steps_ = 0;
  std::uint64_t comparisons_ = 0;
  bool pending_retry_ = false;
  bool depth_cut_ = false;
  bool step_limit_ = false;
  bool finished_ = false;
  SolveStatus last_ = SolveStatus::Exhausted;
  std::vector<ClauseId> root_alts_;
  std::optional<std::size_t> root_choice_;
};

// Convenience wrapper binding an engine to its store, KB and graph.
class SolutionStream {
public:
  SolutionStream(TermStore& store, const KnowledgeBase& kb, Term goal, SolveLimits limits = {},
                 const SemanticGraph* graph = nullptr);

  // Next solution, or empty when exhausted or a limit was hit (see status()).
  std::optional<Term> next();
  SolveStatus status() const { return engine_.last_status(); }
  std::uint64_t steps() const { return engine_.steps(); }
  const SldEngine& engine() const { return engine_; }

  // Drains the stream.
  std::vector<Term> all();

private:
  TermStore& store_;
  const KnowledgeBase& kb_;
  const SemanticGraph* graph_;
  SldEngine engine_;
};

SolutionStream solve_backward(TermStore& store, const KnowledgeBase& kb, Term goal, SolveLimits limits = {},
                              const SemanticGraph* graph = nullptr);

// Rename every variable of a clause apart, consistently across head and body.
struct RenamedClause {
  Term head;
  std::vector<Term> body;
};
RenamedClause rename_clause(TermStore& store, const Clause& c);

}  // namespace ru
