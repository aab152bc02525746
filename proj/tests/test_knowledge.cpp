#include <gtest/gtest.h>

#include <set>

#include "ru/knowledge/backward.hpp"
#include "ru/knowledge/forward.hpp"
#include "ru/knowledge/loader.hpp"
#include "ru/oracle/generators.hpp"
#include "ru/oracle/naive.hpp"
#include "ru/term/parser.hpp"
#include "ru/term/unify.hpp"

using namespace ru;

namespace {

constexpr const char* kFamily =
    "parent(tom, bob).\n"
    "parent(bob, ann).\n"
    "ancestor(X, Y) :- parent(X, Y).\n"
    "ancestor(X, Y) :- parent(X, Z), ancestor(Z, Y).\n";

std::vector<std::string> solve_all(TermStore& s, const KnowledgeBase& kb, std::string_view goal,
                                   const SemanticGraph* g = nullptr) {
  SolutionStream stream(s, kb, parse_term(s, goal), {}, g);
  std::vector<std::string> out;
  for (Term t : stream.all()) out.push_back(s.to_string(t));
  return out;
}

std::set<std::string> texts(const TermStore& s, const std::vector<Term>& ts) {
  std::set<std::string> out;
  for (Term t : ts) out.insert(s.to_string(t));
  return out;
}

}  // namespace

TEST(KnowledgeBase, AssertRetract) {
  TermStore s;
  KnowledgeBase kb;
  const ClauseId id = kb.assert_clause(s, parse_term(s, "parent(tom, bob)"));
  EXPECT_EQ(id, 0u);
  EXPECT_EQ(kb.lookup(s.predicate(parse_term(s, "parent(a, b)"))).size(), 1u);
  EXPECT_TRUE(kb.retract_clause(id));
  EXPECT_FALSE(kb.retract_clause(id));
  EXPECT_EQ(kb.size(), 0u);
  EXPECT_THROW(kb.assert_clause(s, parse_term(s, "X")), KnowledgeError);
}

TEST(KnowledgeBase, RuleLookupAndFirstArgIndex) {
  TermStore s;
  KnowledgeBase kb;
  load_kb(s, kb, kFamily);
  EXPECT_EQ(kb.lookup(s.predicate(parse_term(s, "ancestor(a, b)"))).size(), 2u);
  const auto c = kb.candidates(s, s.predicate(parse_term(s, "parent(a, b)")), parse_term(s, "bob"));
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(s.to_string(kb.clause(c[0]).head), "parent(bob,ann)");
}

TEST(Backward, AncestorOrder) {
  TermStore s;
  KnowledgeBase kb;
  load_kb(s, kb, kFamily);
  EXPECT_EQ(solve_all(s, kb, "ancestor(tom, Q)"),
            (std::vector<std::string>{"ancestor(tom,bob)", "ancestor(tom,ann)"}));
}

TEST(Backward, EmptyKb) {
  TermStore s;
  KnowledgeBase kb;
  SolutionStream stream(s, kb, parse_term(s, "p(a)"));
  EXPECT_FALSE(stream.next());
  EXPECT_EQ(stream.steps(), 0u);
  EXPECT_EQ(stream.status(), SolveStatus::Exhausted);
}

TEST(Backward, Cut) {
  TermStore s;
  KnowledgeBase kb;
  load_kb(s, kb, "q(a). q(b). p(X) :- q(X), !. r(X) :- q(X).");
  EXPECT_EQ(solve_all(s, kb, "p(X)"), std::vector<std::string>{"p(a)"});
  EXPECT_EQ(solve_all(s, kb, "r(X)").size(), 2u);
}

TEST(Backward, StepLimit) {
  TermStore s;
  KnowledgeBase kb;
  load_kb(s, kb, "loop(X) :- loop(X).");
  SolutionStream stream(s, kb, parse_term(s, "loop(a)"), SolveLimits{1000, 100000});
  EXPECT_FALSE(stream.next());
  EXPECT_EQ(stream.status(), SolveStatus::StepLimit);
}

TEST(Backward, GraphBuiltins) {
  TermStore s;
  KnowledgeBase kb;
  SemanticGraph g = load_graph(s, "edge(a, r, b). edge(b, r, c). edge(a, s, z).");
  EXPECT_EQ(solve_all(s, kb, "reach(a, r, Y)", &g), (std::vector<std::string>{"reach(a,r,b)", "reach(a,r,c)"}));
  EXPECT_EQ(solve_all(s, kb, "edge(a, L, Y)", &g).size(), 2u);
}

TEST(Forward, AncestorClosure) {
  TermStore s;
  KnowledgeBase kb;
  load_kb(s, kb, kFamily);
  const ForwardResult r = solve_forward(s, kb);
  EXPECT_EQ(r.status, ForwardStatus::Fixpoint);
  EXPECT_EQ(texts(s, r.derived),
            (std::set<std::string>{"ancestor(tom,bob)", "ancestor(bob,ann)", "ancestor(tom,ann)"}));
}

TEST(Forward, FactsOnly) {
  TermStore s;
  KnowledgeBase kb;
  load_kb(s, kb, "p(a). p(b).");
  EXPECT_TRUE(solve_forward(s, kb).derived.empty());
}

TEST(Forward, RejectsNonDatalog) {
  TermStore s;
  KnowledgeBase kb;
  load_kb(s, kb, "p(f(X)) :- q(X). q(a).");
  EXPECT_THROW(check_datalog(s, kb), DatalogError);
  EXPECT_THROW(solve_forward(s, kb), DatalogError);
}

// Semi-naive evaluation equals naive iteration on random Datalog.
TEST(ForwardProperty, MatchesNaiveFixpoint) {
  Rng rng(99);
  for (int k = 0; k < 20; ++k) {
    TermStore s;
    KnowledgeBase kb;
    load_kb(s, kb, gen::random_datalog(rng, 120));
    std::set<std::string> semi;
    for (const Clause* c : kb.clauses()) {
      if (c->is_fact()) semi.insert(oracle::to_tree(s, c->head).text());
    }
    for (Term t : solve_forward(s, kb).derived) semi.insert(oracle::to_tree(s, t).text());
    EXPECT_EQ(semi, oracle::naive_fixpoint(oracle::clauses_of(s, kb))) << "kb " << k;
  }
}

TEST(Graph, Closure) {
  TermStore s;
  SemanticGraph g = load_graph(s, "edge(a, r, b). edge(b, r, c). edge(c, q, d).");
  const Term r = s.atom("r");
  EXPECT_EQ(texts(s, transitive_closure(g, r, s.atom("a")).nodes), (std::set<std::string>{"b", "c"}));
  EXPECT_TRUE(transitive_closure(g, r, s.atom("c")).nodes.empty());
  EXPECT_THROW(transitive_closure(g, r, s.atom("nowhere")), GraphError);

  SemanticGraph cyc = load_graph(s, "edge(a, r, b). edge(b, r, a).");
  EXPECT_EQ(texts(s, transitive_closure(cyc, r, s.atom("a")).nodes), (std::set<std::string>{"a", "b"}));
}

TEST(Graph, ClosureMatchesBfsOracle) {
  Rng rng(5);
  const oracle::LabeledEdges e = gen::random_graph(rng, 300, 2, 2);
  TermStore s;
  SemanticGraph g;
  std::vector<Term> nodes;
  for (std::uint32_t i = 0; i < e.nodes; ++i) {
    nodes.push_back(s.atom("n" + std::to_string(i)));
    g.add_node(nodes.back());
  }
  const Term labels[] = {s.atom("l0"), s.atom("l1")};
  for (const auto& [a, l, b] : e.edges) g.add_edge(nodes[a], labels[l], nodes[b]);
  for (std::uint32_t src = 0; src < e.nodes; src += 7) {
    std::vector<std::uint32_t> got;
    for (Term t : transitive_closure(g, labels[0], nodes[src]).nodes) got.push_back(g.node_id(t));
    std::sort(got.begin(), got.end());
    EXPECT_EQ(got, oracle::reachable(e, src, 0)) << "source " << src;
  }
}

TEST(Graph, SubgraphMatch) {
  TermStore s;
  SemanticGraph g = load_graph(s, "edge(a, r, b). edge(b, r, c).");
  const Term r = s.atom("r");
  const Term X = s.variable("X"), Y = s.variable("Y"), Z = s.variable("Z");
  std::vector<PatternEdge> one{{X, r, Y}};
  EXPECT_EQ(subgraph_match(s, one, g).size(), 2u);
  std::vector<PatternEdge> two{{X, r, Y}, {Y, r, Z}};
  const auto m = subgraph_match(s, two, g);
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(s.to_string(m[0].deref(s, X)), "a");
  EXPECT_EQ(s.to_string(m[0].deref(s, Z)), "c");
}

TEST(Graph, TriangleCountMatchesBruteForce) {
  Rng rng(11);
  const oracle::LabeledEdges e = gen::random_graph(rng, 50, 4, 1);
  TermStore s;
  SemanticGraph g;
  std::vector<Term> nodes;
  for (std::uint32_t i = 0; i < e.nodes; ++i) {
    nodes.push_back(s.atom("n" + std::to_string(i)));
    g.add_node(nodes.back());
  }
  const Term r = s.atom("r");
  std::set<std::pair<std::uint32_t, std::uint32_t>> adj;
  for (const auto& [a, l, b] : e.edges) {
    g.add_edge(nodes[a], r, nodes[b]);
    adj.insert({a, b});
  }
  std::size_t brute = 0;
  for (std::uint32_t a = 0; a < e.nodes; ++a)
    for (std::uint32_t b = 0; b < e.nodes; ++b)
      for (std::uint32_t c = 0; c < e.nodes; ++c)
        brute += adj.count({a, b}) && adj.count({b, c}) && adj.count({c, a});
  const Term X = s.variable("X"), Y = s.variable("Y"), Z = s.variable("Z");
  std::vector<PatternEdge> tri{{X, r, Y}, {Y, r, Z}, {Z, r, X}};
  EXPECT_EQ(subgraph_match(s, tri, g).size(), brute);
}
