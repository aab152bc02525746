#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ru/term/term.hpp"

// Reference implementations used to check the engines. They share nothing
// with the engines beyond the TermStore they read their input from: plain
// value trees, string-keyed substitutions, textbook algorithms.
namespace ru::oracle {

struct Tree {
  enum class Kind { Var, Atom, Num, Comp };
  Kind kind = Kind::Atom;
  std::string name;
  std::int64_t value = 0;
  std::vector<Tree> args;

  bool is_var() const { return kind == Kind::Var; }
  friend bool operator==(const Tree&, const Tree&) = default;
  friend auto operator<=>(const Tree& a, const Tree& b) { return a.text() <=> b.text(); }
  std::string text() const;
};

// Variables are named by their printed form, so fresh variables stay apart.
Tree to_tree(const TermStore& store, Term t);
Tree var(std::string name);
Tree atom(std::string name);
Tree comp(std::string name, std::vector<Tree> args);

bool is_ground(const Tree& t);
void variables(const Tree& t, std::vector<std::string>& out);

using Subst = std::map<std::string, Tree>;

Tree apply(const Subst& s, const Tree& t);
// Robinson unification with occurs check, substitution kept idempotent.
std::optional<Subst> unify(const Tree& a, const Tree& b);
// One-way matching of a pattern against a ground term, extending `s`.
bool match(const Tree& pattern, const Tree& ground, Subst& s);
// Equal up to a consistent one-to-one renaming of variables.
bool is_variant(const Tree& a, const Tree& b);

}  // namespace ru::oracle
