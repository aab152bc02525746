#include "ru/oracle/generators.hpp"

#include <algorithm>
#include <set>

#include "ru/term/parser.hpp"

namespace ru::gen {
namespace {

constexpr const char* kAtoms[] = {"a", "b", "c"};
constexpr const char* kVars[] = {"X", "Y", "Z", "W"};
struct Functor {
  const char* name;
  std::uint32_t arity;
};
constexpr Functor kFunctors[] = {{"f", 1}, {"g", 2}, {"h", 3}};

Term leaf(TermStore& store, Rng& rng) {
  switch (rng.below(3)) {
    case 0: return store.atom(kAtoms[rng.below(3)]);
    case 1: return store.number(static_cast<std::int64_t>(rng.below(2)) + 1);
    default: return store.variable(kVars[rng.below(4)]);
  }
}

Term build(TermStore& store, Rng& rng, std::size_t budget) {
  if (budget <= 1 || rng.below(3) == 0) return leaf(store, rng);
  // Leave room for at least one cell per argument.
  std::vector<Functor> fits;
  for (const Functor& f : kFunctors) {
    if (f.arity + 1 <= budget) fits.push_back(f);
  }
  const Functor f = fits[rng.below(fits.size())];
  std::size_t left = budget - 1;
  std::vector<Term> args;
  for (std::uint32_t i = 0; i < f.arity; ++i) {
    const std::size_t reserve = f.arity - i - 1;
    const std::size_t share = 1 + rng.below(left - reserve);
    Term a = build(store, rng, share);
    left -= store.cells(a);
    args.push_back(a);
  }
  return store.compound(store.intern(f.name), args);
}

Term perturb(TermStore& store, Rng& rng, Term t, std::size_t budget) {
  if (rng.below(4) == 0) {
    // Replace this subterm wholesale, keeping the overall size in budget.
    return build(store, rng, std::min<std::size_t>(budget, store.cells(t)));
  }
  if (!store.is_compound(t)) return t;
  std::vector<Term> args(store.args(t).begin(), store.args(t).end());
  const std::size_t i = rng.below(args.size());
  args[i] = perturb(store, rng, args[i], store.cells(args[i]));
  return store.compound(store.symbol(t), args);
}

}  // namespace

Term random_term(TermStore& store, Rng& rng, std::size_t max_cells) {
  return build(store, rng, 1 + rng.below(max_cells));
}

std::pair<Term, Term> random_term_pair(TermStore& store, Rng& rng, std::size_t max_cells) {
  const Term x = random_term(store, rng, max_cells);
  Term y = rng.below(2) == 0 ? perturb(store, rng, x, max_cells) : random_term(store, rng, max_cells);
  if (store.cells(y) > max_cells) y = random_term(store, rng, max_cells);
  return {x, y};
}

std::string random_datalog(Rng& rng, std::size_t max_facts) {
  const std::size_t constants = 6 + rng.below(10);
  const std::size_t base = 2 + rng.below(3);
  const std::size_t derived = 2 + rng.below(5);
  std::string out;
  std::set<std::string> seen;
  const std::size_t facts = 10 + rng.below(max_facts - 9);
  for (std::size_t i = 0; i < facts; ++i) {
    const auto rel = rng.below(base);
    const auto x = rng.below(constants);
    const auto y = rng.below(constants);
    const std::string fact =
        "e" + std::to_string(rel) + "(c" + std::to_string(x) + ", c" + std::to_string(y) + ").\n";
    if (seen.insert(fact).second) out += fact;
  }
  // Every base relation gets at least one fact so its predicate exists.
  for (std::size_t b = 0; b < base; ++b) out += "e" + std::to_string(b) + "(c0, c1).\n";

  // Base relation or a lower-numbered derived one. At most one derived goal
  // per body: nesting several keeps proofs finite but makes the number of
  // SLD derivations explode.
  bool derived_used = false;
  auto body_pred = [&](std::size_t d) {
    if (d == 0 || derived_used || rng.below(2) == 0) return "e" + std::to_string(rng.below(base));
    derived_used = true;
    return "d" + std::to_string(rng.below(d));
  };
  const char* vars[] = {"X", "Y", "Z", "W"};
  for (std::size_t d = 0; d < derived; ++d) {
    const std::size_t rules = 1 + rng.below(3);
    for (std::size_t r = 0; r < rules; ++r) {
      const std::size_t goals = 1 + rng.below(3);
      derived_used = false;
      // A chain X -> V1 -> ... -> Y keeps every head variable bound.
      std::string rule = "d" + std::to_string(d) + "(X, Y) :- ";
      std::string prev = "X";
      for (std::size_t g = 0; g < goals; ++g) {
        const std::string next = g + 1 == goals ? "Y" : vars[2 + (g % 2)] + std::to_string(g);
        if (g) rule += ", ";
        if (rng.below(3) == 0 && g + 1 < goals) {
          rule += body_pred(d) + "(" + next + ", " + prev + ")";
        } else {
          rule += body_pred(d) + "(" + prev + ", " + next + ")";
        }
        prev = next;
      }
      out += rule + ".\n";
    }
    if (rng.below(3) == 0) {
      const auto x = rng.below(constants);
      const auto y = rng.below(constants);
      out += "d" + std::to_string(d) + "(c" + std::to_string(x) + ", c" + std::to_string(y) + ").\n";
    }
  }
  return out;
}

PlanningDomain blocksworld_domain(TermStore& store) {
  return parse_domain(store,
                      "operator pickup(X)\n"
                      "  pre: clear(X), ontable(X), handempty\n"
                      "  add: holding(X)\n"
                      "  del: clear(X), ontable(X), handempty.\n"
                      "operator putdown(X)\n"
                      "  pre: holding(X)\n"
                      "  add: clear(X), ontable(X), handempty\n"
                      "  del: holding(X).\n"
                      "operator stack(X, Y)\n"
                      "  pre: holding(X), clear(Y)\n"
                      "  add: on(X, Y), clear(X), handempty\n"
                      "  del: holding(X), clear(Y).\n"
                      "operator unstack(X, Y)\n"
                      "  pre: on(X, Y), clear(X), handempty\n"
                      "  add: holding(X), clear(Y)\n"
                      "  del: on(X, Y), clear(X), handempty.\n");
}

namespace {

// Random partition of blocks into towers, bottom first.
std::vector<std::vector<std::size_t>> random_towers(Rng& rng, std::size_t n) {
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
  std::vector<std::vector<std::size_t>> towers;
  for (std::size_t b : order) {
    if (towers.empty() || rng.below(2) == 0) {
      towers.push_back({b});
    } else {
      towers[rng.below(towers.size())].push_back(b);
    }
  }
  return towers;
}

}  // namespace

PlanningProblem random_blocksworld(TermStore& store, Rng& rng, std::size_t blocks) {
  PlanningProblem p;
  std::vector<Term> names;
  for (std::size_t i = 0; i < blocks; ++i) names.push_back(store.atom("b" + std::to_string(i + 1)));
  p.objects = names;
  auto fact = [&](const char* f, std::initializer_list<Term> args) { return store.compound(f, args); };
  for (const auto& tower : random_towers(rng, blocks)) {
    p.init.push_back(fact("ontable", {names[tower.front()]}));
    for (std::size_t i = 1; i < tower.size(); ++i) p.init.push_back(fact("on", {names[tower[i]], names[tower[i - 1]]}));
    p.init.push_back(fact("clear", {names[tower.back()]}));
  }
  p.init.push_back(store.atom("handempty"));
  // Redraw goals that already hold so every instance needs at least one move.
  auto holds = [&] {
    for (Term g : p.goal) {
      if (std::find(p.init.begin(), p.init.end(), g) == p.init.end()) return false;
    }
    return true;
  };
  do {
    p.goal.clear();
    for (const auto& tower : random_towers(rng, blocks)) {
      for (std::size_t i = 1; i < tower.size(); ++i) p.goal.push_back(fact("on", {names[tower[i]], names[tower[i - 1]]}));
      if (rng.below(2) == 0) p.goal.push_back(fact("ontable", {names[tower.front()]}));
    }
    if (p.goal.empty()) p.goal.push_back(fact("clear", {names[rng.below(blocks)]}));
  } while (blocks > 1 && holds());
  return p;
}

oracle::LabeledEdges random_graph(Rng& rng, std::uint32_t nodes, std::uint32_t avg_degree, std::uint32_t labels) {
  oracle::LabeledEdges g;
  g.nodes = nodes;
  g.labels = labels;
  std::set<std::array<std::uint32_t, 3>> seen;
  const std::uint64_t target = static_cast<std::uint64_t>(nodes) * avg_degree;
  g.edges.reserve(target);
  while (g.edges.size() < target && nodes > 1) {
    const auto s = static_cast<std::uint32_t>(rng.below(nodes));
    const auto t = static_cast<std::uint32_t>(rng.below(nodes));
    const auto l = static_cast<std::uint32_t>(rng.below(labels));
    if (s == t) continue;
    if (seen.insert({s, l, t}).second) g.edges.push_back({s, l, t});
  }
  return g;
}

}  // namespace ru::gen
