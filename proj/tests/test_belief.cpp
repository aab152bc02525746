#include <gtest/gtest.h>

#include "ru/belief/belief_base.hpp"
#include "ru/term/parser.hpp"
#include "ru/term/unify.hpp"
#include "ru/util/rng.hpp"

using namespace ru;

namespace {

Term P(TermStore& s, std::string_view t) { return parse_term(s, t); }

}  // namespace

TEST(Belief, LowerConfidenceContradictionRejected) {
  TermStore s;
  BeliefBase b;
  EXPECT_EQ(b.believe(s, P(s, "p(a)"), 0.9, Provenance::perceived(), 1).outcome, BeliefOutcome::Accepted);
  EXPECT_EQ(b.believe(s, P(s, "not(p(a))"), 0.4, Provenance::perceived(), 2).outcome, BeliefOutcome::Rejected);
  ASSERT_TRUE(b.find(s, P(s, "p(a)")));
  EXPECT_DOUBLE_EQ(b.find(s, P(s, "p(a)"))->confidence, 0.9);
  EXPECT_FALSE(b.find(s, P(s, "not(p(a))")));
  EXPECT_EQ(b.conflicts().size(), 1u);
}

TEST(Belief, TieGoesToNewer) {
  TermStore s;
  BeliefBase b;
  b.believe(s, P(s, "p(a)"), 0.5, Provenance::perceived(), 1);
  EXPECT_EQ(b.believe(s, P(s, "not(p(a))"), 0.5, Provenance::perceived(), 2).outcome, BeliefOutcome::Revised);
  EXPECT_TRUE(b.find(s, P(s, "not(p(a))")));
  EXPECT_FALSE(b.find(s, P(s, "p(a)")));
  EXPECT_EQ(b.conflicts().size(), 1u);
}

TEST(Belief, SameContentKeepsMaxConfidence) {
  TermStore s;
  BeliefBase b;
  b.believe(s, P(s, "p(a)"), 0.3, Provenance::perceived(), 1);
  EXPECT_EQ(b.believe(s, P(s, "p(a)"), 0.8, Provenance::inferred(), 2).outcome, BeliefOutcome::Accepted);
  EXPECT_DOUBLE_EQ(b.find(s, P(s, "p(a)"))->confidence, 0.8);
  EXPECT_EQ(b.size(), 1u);
}

TEST(Belief, RejectsOutOfRangeConfidence) {
  TermStore s;
  BeliefBase b;
  EXPECT_THROW(b.believe(s, P(s, "p(a)"), 1.5, Provenance::perceived(), 0), BeliefError);
}

TEST(Belief, DetectContradiction) {
  TermStore s;
  BeliefBase b;
  b.believe(s, P(s, "p(a)"), 1.0, Provenance::perceived(), 0);
  EXPECT_TRUE(b.detect_contradiction(s, P(s, "not(p(a))")));
  EXPECT_FALSE(b.detect_contradiction(s, P(s, "p(b)")));
  BeliefBase c;
  c.believe(s, P(s, "not(q(a, b))"), 1.0, Provenance::perceived(), 0);
  EXPECT_TRUE(c.detect_contradiction(s, P(s, "q(a, b)")));
}

TEST(Belief, QueryOrder) {
  TermStore s;
  BeliefBase b;
  b.believe(s, P(s, "p(a)"), 0.9, Provenance::perceived(), 0);
  b.believe(s, P(s, "p(b)"), 0.4, Provenance::perceived(), 1);
  const auto r = b.query(s, P(s, "p(X)"));
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(s.to_string(r[0].first.content), "p(a)");
  EXPECT_EQ(s.to_string(r[0].second.deref(s, P(s, "X"))), "a");
  EXPECT_EQ(s.to_string(r[1].first.content), "p(b)");
  EXPECT_TRUE(b.query(s, P(s, "q(X)")).empty());
}

TEST(Belief, QueryMatchesLinearScan) {
  TermStore s;
  BeliefBase b;
  Rng rng(4);
  const char* preds[] = {"p", "q"};
  const char* consts[] = {"a", "b", "c", "d", "e"};
  for (int i = 0; i < 100; ++i) {
    const Term t = s.compound(preds[rng.below(2)], {s.atom(consts[rng.below(5)]), s.atom(consts[rng.below(5)])});
    b.believe(s, t, 0.5, Provenance::perceived(), static_cast<std::uint64_t>(i));
  }
  const Term pattern = P(s, "p(X, Y)");
  std::size_t scan = 0;
  for (const Belief& x : b.beliefs()) {
    Bindings tmp;
    scan += unify(s, pattern, x.content, tmp) == UnifyStatus::Success;
  }
  EXPECT_EQ(b.query(s, pattern).size(), scan);
}

TEST(Belief, DeterministicReplay) {
  auto run = [] {
    TermStore s;
    BeliefBase b;
    Rng rng(8);
    for (int i = 0; i < 300; ++i) {
      Term t = s.compound("p", {s.atom(rng.below(2) ? "a" : "b")});
      if (rng.below(2)) t = s.compound("not", {t});
      b.believe(s, t, static_cast<double>(rng.below(5)) / 4.0, Provenance::perceived(), static_cast<std::uint64_t>(i));
    }
    return b.dump_jsonl(s);
  };
  EXPECT_EQ(run(), run());
}

TEST(BeliefProperty, NoComplementPairsAndConflictAccounting) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    TermStore s;
    BeliefBase b;
    Rng rng(seed);
    std::size_t contested = 0;
    for (int i = 0; i < 500; ++i) {
      Term t = s.compound("p", {s.atom(rng.below(2) ? "a" : "b"), s.atom(rng.below(2) ? "c" : "d")});
      if (rng.below(2)) t = s.compound("not", {t});
      const auto r = b.believe(s, t, static_cast<double>(rng.below(11)) / 10.0, Provenance::perceived(),
                               static_cast<std::uint64_t>(i));
      contested += r.outcome != BeliefOutcome::Accepted;
    }
    for (const Belief& x : b.beliefs()) {
      const Term c = x.content;
      const bool neg = s.symbol_name(s.symbol(c)) == "not";
      const Term other = neg ? s.arg(c, 0) : s.compound("not", {c});
      EXPECT_FALSE(b.find(s, other)) << s.to_string(c);
    }
    EXPECT_EQ(b.conflicts().size(), contested);
  }
}
