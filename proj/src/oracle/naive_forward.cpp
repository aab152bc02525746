#include <functional>

#include "ru/oracle/naive.hpp"

namespace ru::oracle {

std::vector<TreeClause> clauses_of(const TermStore& store, const KnowledgeBase& kb) {
  std::vector<TreeClause> out;
  for (const Clause* c : kb.clauses()) {
    TreeClause tc{to_tree(store, c->head), {}};
    for (Term g : c->body) tc.body.push_back(to_tree(store, g));
    out.push_back(std::move(tc));
  }
  return out;
}

std::set<std::string> naive_fixpoint(const std::vector<TreeClause>& clauses) {
  std::set<std::string> known;
  std::vector<Tree> facts;
  for (const TreeClause& c : clauses) {
    if (c.body.empty() && is_ground(c.head) && known.insert(c.head.text()).second) facts.push_back(c.head);
  }
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<Tree> found;
    for (const TreeClause& c : clauses) {
      if (c.body.empty()) continue;
      std::function<void(std::size_t, Subst&)> join = [&](std::size_t i, Subst& s) {
        if (i == c.body.size()) {
          found.push_back(oracle::apply(s, c.head));
          return;
        }
        for (const Tree& f : facts) {
          Subst next = s;
          if (match(c.body[i], f, next)) join(i + 1, next);
        }
      };
      Subst s;
      join(0, s);
    }
    for (Tree& f : found) {
      if (is_ground(f) && known.insert(f.text()).second) {
        facts.push_back(std::move(f));
        changed = true;
      }
    }
  }
  return known;
}

}  // namespace ru::oracle
