#include <gtest/gtest.h>

#include "ru/oracle/generators.hpp"
#include "ru/oracle/tree.hpp"
#include "ru/term/parser.hpp"
#include "ru/term/unify.hpp"
#include "ru/util/rng.hpp"

using namespace ru;

namespace {

Term P(TermStore& s, std::string_view text) { return parse_term(s, text); }

std::string show(TermStore& s, Term t, const Bindings& b) { return s.to_string(apply_bindings(s, t, b)); }

}  // namespace

TEST(Parser, Compound) {
  TermStore s;
  Term t = P(s, "parent(tom,X)");
  ASSERT_TRUE(s.is_compound(t));
  EXPECT_EQ(s.symbol_name(s.symbol(t)), "parent");
  EXPECT_EQ(s.arity(t), 2u);
  EXPECT_TRUE(s.is_atom(s.arg(t, 0)));
  EXPECT_TRUE(s.is_variable(s.arg(t, 1)));
  EXPECT_EQ(s.to_string(t), "parent(tom,X)");
}

TEST(Parser, Number) {
  TermStore s;
  Term t = P(s, "42");
  ASSERT_TRUE(s.is_number(t));
  EXPECT_EQ(s.value(t), 42);
  EXPECT_EQ(s.value(P(s, "-7")), -7);
}

TEST(Parser, Errors) {
  TermStore s;
  EXPECT_THROW(P(s, "f("), ParseError);
  EXPECT_THROW(P(s, "f()"), ParseError);
  EXPECT_THROW(P(s, "f(a) g"), ParseError);
  try {
    P(s, "f(a,\n  )");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(Parser, AnonymousVariablesAreDistinct) {
  TermStore s;
  Term t = P(s, "f(_, _)");
  EXPECT_NE(s.arg(t, 0), s.arg(t, 1));
  Term u = P(s, "f(X, X)");
  EXPECT_EQ(s.arg(u, 0), s.arg(u, 1));
}

TEST(TermStore, HashConsing) {
  TermStore s;
  EXPECT_EQ(P(s, "f(a, g(b))"), P(s, "f(a, g(b))"));
  EXPECT_NE(P(s, "f(a)"), P(s, "f(b)"));
}

TEST(TermStore, Cells) {
  TermStore s;
  EXPECT_EQ(term_cells(s, P(s, "a")), 1u);
  EXPECT_EQ(term_cells(s, P(s, "f(a, b)")), 3u);
  EXPECT_EQ(term_cells(s, P(s, "f(g(a), g(a))")), 5u);
}

TEST(Unify, Simple) {
  TermStore s;
  Bindings b;
  Term x = P(s, "f(X, b)");
  ASSERT_EQ(unify(s, x, P(s, "f(a, Y)"), b), UnifyStatus::Success);
  EXPECT_EQ(show(s, P(s, "X"), b), "a");
  EXPECT_EQ(show(s, P(s, "Y"), b), "b");
}

TEST(Unify, OccursCheck) {
  TermStore s;
  Bindings b;
  EXPECT_EQ(unify(s, P(s, "X"), P(s, "f(X)"), b), UnifyStatus::Failure);
  EXPECT_TRUE(b.empty());
}

TEST(Unify, SharedVariable) {
  TermStore s;
  Bindings b;
  ASSERT_EQ(unify(s, P(s, "f(X, X)"), P(s, "f(g(Z), g(w))"), b), UnifyStatus::Success);
  EXPECT_EQ(show(s, P(s, "X"), b), "g(w)");
  EXPECT_EQ(show(s, P(s, "Z"), b), "w");
}

TEST(Unify, FailureLeavesBindingsUntouched) {
  TermStore s;
  Bindings b;
  ASSERT_EQ(unify(s, P(s, "A"), P(s, "c"), b), UnifyStatus::Success);
  EXPECT_EQ(unify(s, P(s, "f(X, a)"), P(s, "f(b, b)"), b), UnifyStatus::Failure);
  EXPECT_EQ(b.size(), 1u);
}

TEST(Unify, ComparisonLimit) {
  TermStore s;
  Bindings b;
  UnifyOptions opt;
  opt.max_comparisons = 2;
  EXPECT_EQ(unify(s, P(s, "f(a, b, c)"), P(s, "f(a, b, c2)"), b, nullptr, opt), UnifyStatus::ResourceLimit);
}

TEST(ApplyBindings, Examples) {
  TermStore s;
  Bindings b;
  b.bind(P(s, "X"), P(s, "a"));
  EXPECT_EQ(show(s, P(s, "p(X)"), b), "p(a)");
  EXPECT_EQ(show(s, P(s, "p(a)"), Bindings{}), "p(a)");
  Bindings c;
  c.bind(P(s, "X"), P(s, "f(Y)"));
  c.bind(P(s, "Y"), P(s, "b"));
  EXPECT_EQ(show(s, P(s, "p(X, Y)"), c), "p(f(b),b)");
}

// Engine against the naive tree unifier on random pairs.
TEST(UnifyProperty, AgreesWithNaiveOracle) {
  Rng rng(123);
  for (int i = 0; i < 2000; ++i) {
    TermStore s;
    auto [x, y] = gen::random_term_pair(s, rng, 12);
    Bindings b;
    const bool ok = unify(s, x, y, b) == UnifyStatus::Success;
    const auto tx = oracle::to_tree(s, x);
    const auto ty = oracle::to_tree(s, y);
    const auto mgu = oracle::unify(tx, ty);
    ASSERT_EQ(ok, mgu.has_value()) << tx.text() << " = " << ty.text();
    if (!ok) continue;
    const auto ix = oracle::to_tree(s, apply_bindings(s, x, b));
    ASSERT_EQ(ix, oracle::to_tree(s, apply_bindings(s, y, b)));
    ASSERT_TRUE(oracle::is_variant(ix, oracle::apply(*mgu, tx))) << ix.text();
  }
}

// Unification is symmetric in outcome and the unifier is idempotent.
TEST(UnifyProperty, SymmetricAndIdempotent) {
  Rng rng(7);
  for (int i = 0; i < 1000; ++i) {
    TermStore s;
    auto [x, y] = gen::random_term_pair(s, rng, 12);
    Bindings ab;
    Bindings ba;
    const bool xy = unify(s, x, y, ab) == UnifyStatus::Success;
    ASSERT_EQ(xy, unify(s, y, x, ba) == UnifyStatus::Success);
    if (!xy) continue;
    const Term once = apply_bindings(s, x, ab);
    ASSERT_EQ(apply_bindings(s, once, ab), once);
  }
}

TEST(Oracle, NaiveUnifier) {
  using namespace oracle;
  auto s = unify(comp("f", {var("X"), atom("b")}), comp("f", {atom("a"), var("Y")}));
  ASSERT_TRUE(s);
  EXPECT_EQ(oracle::apply(*s, var("X")).text(), "a");
  EXPECT_FALSE(unify(var("X"), comp("f", {var("X")})));
  EXPECT_TRUE(is_variant(comp("f", {var("A"), var("B")}), comp("f", {var("X"), var("Y")})));
  EXPECT_FALSE(is_variant(comp("f", {var("A"), var("A")}), comp("f", {var("X"), var("Y")})));
}
