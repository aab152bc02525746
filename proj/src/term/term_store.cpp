#include "ru/term/term.hpp"

#include <limits>
#include <ostream>
#include <sstream>

#include "ru/util/hash.hpp"

namespace ru {
namespace {

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  return a > std::numeric_limits<std::uint64_t>::max() - b ? std::numeric_limits<std::uint64_t>::max() : a + b;
}

}  // namespace

TermStore::TermStore() {
  nodes_.reserve(256);
  args_.reserve(512);
}

SymbolId TermStore::intern(std::string_view name) {
  auto it = symbol_ids_.find(std::string(name));
  if (it != symbol_ids_.end()) return it->second;
  const auto id = static_cast<SymbolId>(symbols_.size());
  symbols_.emplace_back(name);
  symbol_ids_.emplace(symbols_.back(), id);
  return id;
}

std::optional<SymbolId> TermStore::find_symbol(std::string_view name) const {
  auto it = symbol_ids_.find(std::string(name));
  if (it == symbol_ids_.end()) return std::nullopt;
  return it->second;
}

std::uint64_t TermStore::node_hash(TermKind kind, std::uint32_t symbol, std::int64_t value,
                                   std::span<const Term> args) {
  std::uint64_t h = mix64(static_cast<std::uint64_t>(kind) + 1);
  h = hash_combine(h, symbol);
  h = hash_combine(h, static_cast<std::uint64_t>(value));
  for (Term a : args) h = hash_combine(h, a.index());
  return h;
}

std::optional<Term> TermStore::lookup(const Node& probe, std::span<const Term> args) const {
  auto [lo, hi] = consed_.equal_range(probe.hash);
  for (auto it = lo; it != hi; ++it) {
    const Node& n = nodes_[it->second];
    if (n.kind != probe.kind || n.symbol != probe.symbol || n.value != probe.value || n.arity != probe.arity) {
      continue;
    }
    bool same = true;
    for (std::uint32_t i = 0; i < n.arity && same; ++i) same = args_[n.first_arg + i] == args[i];
    if (same) return Term(it->second);
  }
  return std::nullopt;
}

Term TermStore::intern_node(Node node, std::span<const Term> args, bool hashcons) {
  node.hash = node_hash(node.kind, node.symbol, node.value, args);
  if (hashcons) {
    if (auto found = lookup(node, args)) return *found;
  }
  node.first_arg = static_cast<std::uint32_t>(args_.size());
  // `args` may point into args_ itself; copy before growing it.
  const std::vector<Term> copy(args.begin(), args.end());
  args_.insert(args_.end(), copy.begin(), copy.end());
  const auto index = static_cast<std::uint32_t>(nodes_.size());
  nodes_.push_back(node);
  if (hashcons) consed_.emplace(node.hash, index);
  return Term(index);
}

Term TermStore::atom(SymbolId name) {
  return intern_node({TermKind::Atom, true, name, 0, 0, 0, 1, 0}, {}, true);
}

Term TermStore::number(std::int64_t value) {
  return intern_node({TermKind::Number, true, 0, 0, 0, value, 1, 0}, {}, true);
}

Term TermStore::variable(SymbolId name) {
  return intern_node({TermKind::Variable, false, name, 0, 0, 0, 1, 0}, {}, true);
}

Term TermStore::fresh_variable(SymbolId base) {
  const std::int64_t serial = next_serial_++;
  return intern_node({TermKind::Variable, false, base, 0, 0, serial, 1, 0}, {}, false);
}

Term TermStore::compound(SymbolId functor, std::span<const Term> args) {
  if (args.empty()) return atom(functor);
  bool ground = true;
  std::uint64_t cells = 1;
  for (Term a : args) {
    ground = ground && nodes_[a.index()].ground;
    cells = saturating_add(cells, nodes_[a.index()].cells);
  }
  return intern_node({TermKind::Compound, ground, functor, static_cast<std::uint32_t>(args.size()), 0, 0, cells, 0},
                     args, true);
}

Term TermStore::compound(std::string_view functor, std::initializer_list<Term> args) {
  return compound(intern(functor), std::span<const Term>(args.begin(), args.size()));
}

std::optional<Term> TermStore::find_atom(SymbolId name) const {
  Node probe{TermKind::Atom, true, name, 0, 0, 0, 1, 0};
  probe.hash = node_hash(probe.kind, probe.symbol, probe.value, {});
  return lookup(probe, {});
}

std::optional<Term> TermStore::find_compound(SymbolId functor, std::span<const Term> args) const {
  if (args.empty()) return find_atom(functor);
  Node probe{TermKind::Compound, false, functor, static_cast<std::uint32_t>(args.size()), 0, 0, 0, 0};
  probe.hash = node_hash(probe.kind, probe.symbol, probe.value, args);
  return lookup(probe, args);
}

std::uint64_t TermStore::shape_hash(Term t) const {
  const Node& n = nodes_[t.index()];
  std::uint64_t h = mix64(static_cast<std::uint64_t>(n.kind) + 17);
  switch (n.kind) {
    case TermKind::Number:
      return hash_combine(h, static_cast<std::uint64_t>(n.value));
    case TermKind::Variable:
      return hash_combine(hash_combine(h, n.symbol), static_cast<std::uint64_t>(n.value));
    default:
      return hash_combine(hash_combine(h, n.symbol), n.arity);
  }
}

void TermStore::write(std::ostream& os, Term t) const {
  const Node& n = nodes_[t.index()];
  switch (n.kind) {
    case TermKind::Atom:
      os << symbols_[n.symbol];
      break;
    case TermKind::Number:
      os << n.value;
      break;
    case TermKind::Variable:
      os << symbols_[n.symbol];
      if (n.value != 0) os << '_' << n.value;
      break;
    case TermKind::Compound: {
      os << symbols_[n.symbol] << '(';
      for (std::uint32_t i = 0; i < n.arity; ++i) {
        if (i) os << ',';
        write(os, args_[n.first_arg + i]);
      }
      os << ')';
      break;
    }
  }
}

std::string TermStore::to_string(Term t) const {
  std::ostringstream os;
  write(os, t);
  return os.str();
}

Term import_term(const TermStore& from, Term t, TermStore& to, std::unordered_map<Term, Term>* memo) {
  std::unordered_map<Term, Term> local;
  auto& seen = memo ? *memo : local;
  if (auto it = seen.find(t); it != seen.end()) return it->second;
  Term out;
  switch (from.kind(t)) {
    case TermKind::Atom:
      out = to.atom(from.symbol_name(from.symbol(t)));
      break;
    case TermKind::Number:
      out = to.number(from.value(t));
      break;
    case TermKind::Variable: {
      const auto name = to.intern(from.symbol_name(from.symbol(t)));
      out = from.serial(t) == 0 ? to.variable(name) : to.fresh_variable(name);
      break;
    }
    case TermKind::Compound: {
      std::vector<Term> args;
      args.reserve(from.arity(t));
      for (Term a : from.args(t)) args.push_back(import_term(from, a, to, &seen));
      out = to.compound(to.intern(from.symbol_name(from.symbol(t))), args);
      break;
    }
  }
  seen.emplace(t, out);
  return out;
}

}  // namespace ru
