#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ru/knowledge/knowledge_base.hpp"
#include "ru/knowledge/semantic_graph.hpp"

namespace ru {

struct ParsedClause {
  Term head;
  std::vector<Term> body;
  std::size_t line = 0;
};

// `.rkb` text: `head.` or `head :- g1, ..., gn.`; throws ParseError.
std::vector<ParsedClause> parse_clauses(TermStore& store, std::string_view text);
// Parses and asserts every clause into `kb`; returns the number asserted.
std::size_t load_kb(TermStore& store, KnowledgeBase& kb, std::string_view text);
KnowledgeBase load_kb_file(TermStore& store, const std::string& path);

// `.rsg` text: `edge(source, label, target).` lines, plus optional
// `node(n).` for isolated nodes. Arguments must be atoms.
SemanticGraph load_graph(TermStore& store, std::string_view text);
SemanticGraph load_graph_file(TermStore& store, const std::string& path);

}  // namespace ru
