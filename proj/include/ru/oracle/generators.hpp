#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "ru/oracle/naive.hpp"
#include "ru/planner/domain.hpp"
#include "ru/util/rng.hpp"

// Seeded workload generators shared by tests, the verify suite and benches.
namespace ru::gen {

// Two terms of at most `max_cells` cells each over a small vocabulary. The
// pair shares variables and, half the time, the second is a perturbed copy
// of the first so that both outcomes are common.
std::pair<Term, Term> random_term_pair(TermStore& store, Rng& rng, std::size_t max_cells = 12);
Term random_term(TermStore& store, Rng& rng, std::size_t max_cells);

// Datalog program text: binary base relations over a constant pool and
// derived predicates whose bodies only mention base relations and
// lower-numbered derived predicates, so the dependency graph is acyclic and
// depth-first resolution terminates.
std::string random_datalog(Rng& rng, std::size_t max_facts = 200);

PlanningDomain blocksworld_domain(TermStore& store);
// Random start and goal towers over `blocks` blocks b1..bn.
PlanningProblem random_blocksworld(TermStore& store, Rng& rng, std::size_t blocks);

// Graph with `nodes` nodes and about `avg_degree` out-edges per node, labels
// drawn uniformly from `labels`. Edges are distinct.
oracle::LabeledEdges random_graph(Rng& rng, std::uint32_t nodes, std::uint32_t avg_degree, std::uint32_t labels);

}  // namespace ru::gen
