#include "ru/knowledge/semantic_graph.hpp"

#include <algorithm>
#include <deque>

#include "ru/term/unify.hpp"

namespace ru {

bool SemanticGraph::add_node(Term node) {
  auto [it, inserted] = node_ids_.try_emplace(node, static_cast<std::uint32_t>(nodes_.size()));
  if (inserted) nodes_.push_back(node);
  return inserted;
}

bool SemanticGraph::add_edge(Term source, Term label, Term target) {
  if (!edge_set_.insert(Edge{source, label, target}).second) return false;
  add_node(source);
  add_node(target);
  if (std::find(labels_.begin(), labels_.end(), label) == labels_.end()) labels_.push_back(label);
  edges_.push_back(Edge{source, label, target});
  adjacency_[pair_key(source, label)].push_back(target);
  return true;
}

bool SemanticGraph::has_edge(Term source, Term label, Term target) const {
  return edge_set_.count(Edge{source, label, target}) != 0;
}

std::uint32_t SemanticGraph::node_id(Term node) const {
  auto it = node_ids_.find(node);
  if (it == node_ids_.end()) throw GraphError("unknown graph node");
  return it->second;
}

std::span<const Term> SemanticGraph::successors(Term source, Term label) const {
  auto it = adjacency_.find(pair_key(source, label));
  if (it == adjacency_.end()) return {};
  return it->second;
}

ClosureResult transitive_closure(const SemanticGraph& g, Term label, Term start) {
  if (!g.has_node(start)) throw GraphError("unknown start node");
  ClosureResult out;
  std::unordered_set<Term> seen;
  std::deque<Term> queue{start};
  while (!queue.empty()) {
    Term n = queue.front();
    queue.pop_front();
    ++out.expanded;
    for (Term m : g.successors(n, label)) {
      if (!seen.insert(m).second) continue;
      out.nodes.push_back(m);
      queue.push_back(m);
    }
  }
  return out;
}

namespace {

struct Matcher {
  const TermStore& store;
  std::span<const PatternEdge> pattern;
  const SemanticGraph& g;
  Bindings b;
  std::vector<Bindings> out;

  // Candidate (source, target) pairs for one pattern edge under current
  // bindings, in node-id order.
  std::vector<std::pair<Term, Term>> candidates(const PatternEdge& e) const {
    Term s = b.deref(store, e.source);
    std::vector<std::pair<Term, Term>> pairs;
    if (!store.is_variable(s)) {
      if (!g.has_node(s)) return {};
      for (Term t : g.successors(s, e.label)) pairs.emplace_back(s, t);
    } else {
      for (const Edge& edge : g.edges()) {
        if (edge.label == e.label) pairs.emplace_back(edge.source, edge.target);
      }
    }
    std::sort(pairs.begin(), pairs.end(), [&](const auto& x, const auto& y) {
      auto kx = std::pair(g.node_id(x.first), g.node_id(x.second));
      auto ky = std::pair(g.node_id(y.first), g.node_id(y.second));
      return kx < ky;
    });
    return pairs;
  }

  void search(std::size_t i) {
    if (i == pattern.size()) {
      out.push_back(b);
      return;
    }
    const PatternEdge& e = pattern[i];
    for (auto [s, t] : candidates(e)) {
      const auto mark = b.mark();
      if (unify(store, e.source, s, b) == UnifyStatus::Success &&
          unify(store, e.target, t, b) == UnifyStatus::Success) {
        search(i + 1);
      }
      b.undo_to(mark);
    }
  }
};

}  // namespace

std::vector<Bindings> subgraph_match(const TermStore& store, std::span<const PatternEdge> pattern,
                                     const SemanticGraph& g) {
  if (pattern.empty()) throw GraphError("empty pattern");
  for (const PatternEdge& e : pattern) {
    if (!store.is_atom(e.label)) throw GraphError("pattern labels must be ground atoms");
  }
  Matcher m{store, pattern, g, {}, {}};
  m.search(0);
  return std::move(m.out);
}

}  // namespace ru
