#include "ru/knowledge/loader.hpp"

#include "ru/term/parser.hpp"
#include "ru/util/file.hpp"

namespace ru {

std::vector<ParsedClause> parse_clauses(TermStore& store, std::string_view text) {
  TermReader reader(store, text);
  std::vector<ParsedClause> out;
  while (!reader.at_end()) {
    ParsedClause c;
    c.line = reader.line();
    c.head = reader.read_term();
    if (!store.is_callable(c.head)) reader.fail("clause head must be an atom or compound term");
    if (reader.accept(":-")) c.body = reader.read_term_list();
    reader.expect(".");
    out.push_back(std::move(c));
  }
  return out;
}

std::size_t load_kb(TermStore& store, KnowledgeBase& kb, std::string_view text) {
  auto clauses = parse_clauses(store, text);
  for (auto& c : clauses) {
    try {
      kb.assert_clause(store, c.head, std::move(c.body));
    } catch (const KnowledgeError& e) {
      throw ParseError(c.line, 1, e.what());
    }
  }
  return clauses.size();
}

KnowledgeBase load_kb_file(TermStore& store, const std::string& path) {
  KnowledgeBase kb;
  load_kb(store, kb, read_text_file(path));
  return kb;
}

SemanticGraph load_graph(TermStore& store, std::string_view text) {
  TermReader reader(store, text);
  SemanticGraph g;
  const SymbolId edge = store.intern("edge");
  const SymbolId node = store.intern("node");
  while (!reader.at_end()) {
    const Term t = reader.read_term();
    reader.expect(".");
    bool atoms = store.is_compound(t);
    if (atoms) {
      for (Term a : store.args(t)) atoms = atoms && store.is_atom(a);
    }
    if (atoms && store.symbol(t) == edge && store.arity(t) == 3) {
      g.add_edge(store.arg(t, 0), store.arg(t, 1), store.arg(t, 2));
    } else if (atoms && store.symbol(t) == node && store.arity(t) == 1) {
      g.add_node(store.arg(t, 0));
    } else {
      reader.fail("expected edge(source, label, target) or node(n) with atom arguments");
    }
  }
  return g;
}

SemanticGraph load_graph_file(TermStore& store, const std::string& path) {
  return load_graph(store, read_text_file(path));
}

}  // namespace ru
