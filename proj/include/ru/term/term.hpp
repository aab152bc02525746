#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ru {

using SymbolId = std::uint32_t;

enum class TermKind : std::uint8_t { Variable, Atom, Number, Compound };

// Handle into a TermStore. Terms are hash-consed, so two handles from the
// same store are equal exactly when the terms are structurally equal.
class Term {
public:
  constexpr Term() = default;
  constexpr explicit Term(std::uint32_t index) : index_(index) {}

  constexpr std::uint32_t index() const { return index_; }
  constexpr bool valid() const { return index_ != kInvalid; }
  constexpr explicit operator bool() const { return valid(); }

  friend constexpr bool operator==(Term, Term) = default;
  friend constexpr auto operator<=>(Term, Term) = default;

private:
  static constexpr std::uint32_t kInvalid = UINT32_MAX;
  std::uint32_t index_ = kInvalid;
};

struct PredicateKey {
  SymbolId functor = 0;
  std::uint32_t arity = 0;

  friend bool operator==(const PredicateKey&, const PredicateKey&) = default;
  friend auto operator<=>(const PredicateKey&, const PredicateKey&) = default;
};

}  // namespace ru

template <>
struct std::hash<ru::Term> {
  std::size_t operator()(ru::Term t) const noexcept { return std::hash<std::uint32_t>{}(t.index()); }
};

template <>
struct std::hash<ru::PredicateKey> {
  std::size_t operator()(const ru::PredicateKey& k) const noexcept {
    return (static_cast<std::size_t>(k.functor) << 8) ^ k.arity;
  }
};

namespace ru {

// Arena of interned symbols and hash-consed terms. Append-only: handles stay
// valid for the life of the store, and copying a store copies every handle
// along with it.
class TermStore {
public:
  TermStore();

  SymbolId intern(std::string_view name);
  std::optional<SymbolId> find_symbol(std::string_view name) const;
  std::string_view symbol_name(SymbolId id) const { return symbols_[id]; }
  std::size_t symbol_count() const { return symbols_.size(); }

  Term atom(std::string_view name) { return atom(intern(name)); }
  Term atom(SymbolId name);
  Term number(std::int64_t value);
  Term variable(std::string_view name) { return variable(intern(name)); }
  Term variable(SymbolId name);
  // A variable distinct from every variable created so far, printed as
  // `<base>_<serial>`.
  Term fresh_variable(SymbolId base);
  // Zero arguments collapse to the atom of the same name.
  Term compound(SymbolId functor, std::span<const Term> args);
  Term compound(std::string_view functor, std::initializer_list<Term> args);

  // Lookups that never allocate; empty when the term was never built.
  std::optional<Term> find_atom(SymbolId name) const;
  std::optional<Term> find_compound(SymbolId functor, std::span<const Term> args) const;

  TermKind kind(Term t) const { return nodes_[t.index()].kind; }
  bool is_variable(Term t) const { return kind(t) == TermKind::Variable; }
  bool is_atom(Term t) const { return kind(t) == TermKind::Atom; }
  bool is_number(Term t) const { return kind(t) == TermKind::Number; }
  bool is_compound(Term t) const { return kind(t) == TermKind::Compound; }
  bool is_callable(Term t) const { return is_atom(t) || is_compound(t); }
  bool is_constant(Term t) const { return is_atom(t) || is_number(t); }

  // Variable name, atom name, or compound functor.
  SymbolId symbol(Term t) const { return nodes_[t.index()].symbol; }
  std::int64_t value(Term t) const { return nodes_[t.index()].value; }
  std::uint32_t serial(Term t) const { return static_cast<std::uint32_t>(nodes_[t.index()].value); }
  std::uint32_t arity(Term t) const { return nodes_[t.index()].arity; }
  std::span<const Term> args(Term t) const {
    const auto& n = nodes_[t.index()];
    return {args_.data() + n.first_arg, n.arity};
  }
  Term arg(Term t, std::size_t i) const { return args(t)[i]; }
  bool is_ground(Term t) const { return nodes_[t.index()].ground; }
  // Node count of the term viewed as a tree (shared subterms counted per
  // occurrence). Saturates at UINT64_MAX.
  std::uint64_t cells(Term t) const { return nodes_[t.index()].cells; }
  // Functor and arity for callable terms; atoms have arity 0.
  PredicateKey predicate(Term t) const { return {symbol(t), arity(t)}; }
  // Hash of (kind, functor/value, arity); independent of handle numbering.
  std::uint64_t shape_hash(Term t) const;

  // Number of term nodes allocated. Monotone non-decreasing.
  std::size_t size() const { return nodes_.size(); }

  std::string to_string(Term t) const;
  void write(std::ostream& os, Term t) const;

private:
  struct Node {
    TermKind kind;
    bool ground;
    std::uint32_t symbol;
    std::uint32_t arity;
    std::uint32_t first_arg;
    std::int64_t value;
    std::uint64_t cells;
    std::uint64_t hash;
  };

  Term intern_node(Node node, std::span<const Term> args, bool hashcons);
  std::optional<Term> lookup(const Node& probe, std::span<const Term> args) const;
  static std::uint64_t node_hash(TermKind kind, std::uint32_t symbol, std::int64_t value,
                                 std::span<const Term> args);

  std::vector<std::string> symbols_;
  std::unordered_map<std::string, SymbolId> symbol_ids_;
  std::vector<Node> nodes_;
  std::vector<Term> args_;
  std::unordered_multimap<std::uint64_t, std::uint32_t> consed_;
  std::uint32_t next_serial_ = 1;
};

// Copy `t` from one store into another, preserving structure. Variables keep
// their name; renamed variables are re-created fresh in the destination
// (consistently within one call via `memo`).
Term import_term(const TermStore& from, Term t, TermStore& to,
                 std::unordered_map<Term, Term>* memo = nullptr);

}  // namespace ru
