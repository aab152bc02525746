#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ru/term/bindings.hpp"
#include "ru/term/term.hpp"

namespace ru {

struct Edge {
  Term source;
  Term label;
  Term target;

  friend bool operator==(const Edge&, const Edge&) = default;
};

class GraphError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Labeled digraph over atoms. Node ids follow first appearance.
class SemanticGraph {
public:
  // False when the node was already present.
  bool add_node(Term node);
  // False for a duplicate edge. Endpoints are added as nodes.
  bool add_edge(Term source, Term label, Term target);

  bool has_node(Term node) const { return node_ids_.count(node) != 0; }
  bool has_edge(Term source, Term label, Term target) const;
  // Throws GraphError for unknown nodes.
  std::uint32_t node_id(Term node) const;

  // Targets of (source, label) edges in insertion order.
  std::span<const Term> successors(Term source, Term label) const;
  // Labels in order of first use.
  const std::vector<Term>& labels() const { return labels_; }
  const std::vector<Term>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

private:
  static std::uint64_t pair_key(Term a, Term b) { return (std::uint64_t{a.index()} << 32) | b.index(); }
  struct EdgeHash {
    std::size_t operator()(const Edge& e) const noexcept {
      return std::hash<std::uint64_t>{}(pair_key(e.source, e.label) * 0x9E3779B97F4A7C15ULL ^ e.target.index());
    }
  };

  std::vector<Term> nodes_;
  std::unordered_map<Term, std::uint32_t> node_ids_;
  std::vector<Edge> edges_;
  std::vector<Term> labels_;
  std::unordered_map<std::uint64_t, std::vector<Term>> adjacency_;
  std::unordered_set<Edge, EdgeHash> edge_set_;
};

struct ClosureResult {
  // Reachable nodes in breadth-first discovery order.
  std::vector<Term> nodes;
  // Nodes whose outgoing edges were scanned.
  std::uint64_t expanded = 0;
};

// Nodes reachable from `start` through one or more `label` edges. Throws
// GraphError when `start` is not a node.
ClosureResult transitive_closure(const SemanticGraph& g, Term label, Term start);

struct PatternEdge {
  Term source;
  Term label;
  Term target;
};

// Every assignment of pattern variables to nodes under which all pattern
// edges exist. Ordered by pattern edge, then by node id. Throws GraphError
// for an empty pattern or a non-ground label.
std::vector<Bindings> subgraph_match(const TermStore& store, std::span<const PatternEdge> pattern,
                                     const SemanticGraph& g);

}  // namespace ru
