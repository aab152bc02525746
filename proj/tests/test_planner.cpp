#include <gtest/gtest.h>

#include "ru/oracle/generators.hpp"
#include "ru/oracle/naive.hpp"
#include "ru/planner/search.hpp"
#include "ru/planner/validate.hpp"
#include "ru/term/parser.hpp"

using namespace ru;

namespace {

PlanningProblem two_blocks(TermStore& s) {
  return parse_problem(s,
                       "objects: a, b.\n"
                       "init: ontable(a), ontable(b), clear(a), clear(b), handempty.\n"
                       "goal: on(a, b).\n");
}

std::vector<std::string> names(const TermStore& s, const std::vector<Term>& steps) {
  std::vector<std::string> out;
  for (Term t : steps) out.push_back(s.to_string(t));
  return out;
}

}  // namespace

TEST(Planner, TwoBlocks) {
  TermStore s;
  const PlanningDomain d = gen::blocksworld_domain(s);
  const PlanningProblem p = two_blocks(s);
  const PlanResult r = plan(s, d, p);
  ASSERT_EQ(r.status, PlanStatus::Solved);
  EXPECT_EQ(names(s, r.plan.steps), (std::vector<std::string>{"pickup(a)", "stack(a,b)"}));
  EXPECT_TRUE(validate_plan(s, d, p, r.plan.steps).valid);
  const auto bfs = oracle::bfs_plan(s, d, p, 8);
  ASSERT_TRUE(bfs.solved);
  EXPECT_EQ(bfs.plan.size(), 2u);
  EXPECT_LE(hmax(s, d, p), 2u);
}

TEST(Planner, GoalAlreadyHolds) {
  TermStore s;
  const PlanningDomain d = gen::blocksworld_domain(s);
  PlanningProblem p = two_blocks(s);
  p.goal = {parse_term(s, "clear(a)")};
  const PlanResult r = plan(s, d, p);
  ASSERT_EQ(r.status, PlanStatus::Solved);
  EXPECT_TRUE(r.plan.steps.empty());
  EXPECT_TRUE(validate_plan(s, d, p, r.plan.steps).valid);
  EXPECT_EQ(hmax(s, d, p), 0u);
}

TEST(Planner, Unsolvable) {
  TermStore s;
  const PlanningDomain d = gen::blocksworld_domain(s);
  PlanningProblem p = two_blocks(s);
  p.goal = {parse_term(s, "flying(a)")};
  EXPECT_EQ(plan(s, d, p).status, PlanStatus::Unsolvable);
  EXPECT_EQ(hmax(s, d, p), kHInfinity);
}

TEST(Planner, Budget) {
  TermStore s;
  const PlanningDomain d = gen::blocksworld_domain(s);
  Rng rng(3);
  const PlanningProblem p = gen::random_blocksworld(s, rng, 5);
  PlanConfig cfg;
  cfg.max_expansions = 1;
  const PlanResult r = plan(s, d, p, cfg);
  EXPECT_NE(r.status, PlanStatus::Unsolvable);
}

TEST(Validate, MissingPrecondition) {
  TermStore s;
  const PlanningDomain d = gen::blocksworld_domain(s);
  const PlanningProblem p = two_blocks(s);
  const std::vector<Term> steps{parse_term(s, "stack(a, b)")};
  const ValidationResult v = validate_plan(s, d, p, steps);
  EXPECT_FALSE(v.valid);
  ASSERT_TRUE(v.failed_step);
  EXPECT_EQ(*v.failed_step, 0u);
  ASSERT_EQ(v.missing.size(), 1u);
  EXPECT_EQ(s.to_string(v.missing[0]), "holding(a)");
}

TEST(Validate, GoalNotReached) {
  TermStore s;
  const PlanningDomain d = gen::blocksworld_domain(s);
  const PlanningProblem p = two_blocks(s);
  const std::vector<Term> steps{parse_term(s, "pickup(a)")};
  EXPECT_FALSE(validate_plan(s, d, p, steps).valid);
}

TEST(Domain, ParseErrors) {
  TermStore s;
  EXPECT_THROW(parse_domain(s, "operator go(X) pre: at(Y) add: at(X) del: ."), std::exception);
  EXPECT_THROW(parse_problem(s, "init: on(X, b)."), PlanningError);
  EXPECT_THROW(parse_problem(s, "bogus: a."), ParseError);
}

// hmax A* is optimal and admissible on random small blocksworld.
TEST(PlannerProperty, OptimalAgainstBfs) {
  Rng rng(17);
  int checked = 0;
  for (int i = 0; i < 60; ++i) {
    TermStore s;
    const PlanningDomain d = gen::blocksworld_domain(s);
    const PlanningProblem p = gen::random_blocksworld(s, rng, 3 + rng.below(2));
    const auto bfs = oracle::bfs_plan(s, d, p, 8);
    if (!bfs.solved) continue;
    ++checked;
    const PlanResult r = plan(s, d, p);
    ASSERT_EQ(r.status, PlanStatus::Solved);
    EXPECT_EQ(r.plan.cost(), bfs.plan.size());
    EXPECT_LE(hmax(s, d, p), bfs.plan.size());
    EXPECT_TRUE(validate_plan(s, d, p, r.plan.steps).valid);
  }
  EXPECT_GT(checked, 30);
}
