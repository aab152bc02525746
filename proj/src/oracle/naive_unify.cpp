#include <functional>
#include <set>

#include "ru/oracle/tree.hpp"

namespace ru::oracle {

std::string Tree::text() const {
  switch (kind) {
    case Kind::Var:
    case Kind::Atom: return name;
    case Kind::Num: return std::to_string(value);
    case Kind::Comp: {
      std::string s = name + "(";
      for (std::size_t i = 0; i < args.size(); ++i) {
        if (i) s += ",";
        s += args[i].text();
      }
      return s + ")";
    }
  }
  return {};
}

Tree to_tree(const TermStore& store, Term t) {
  Tree out;
  switch (store.kind(t)) {
    case TermKind::Variable:
      out.kind = Tree::Kind::Var;
      out.name = store.to_string(t);
      break;
    case TermKind::Atom:
      out.kind = Tree::Kind::Atom;
      out.name = std::string(store.symbol_name(store.symbol(t)));
      break;
    case TermKind::Number:
      out.kind = Tree::Kind::Num;
      out.value = store.value(t);
      break;
    case TermKind::Compound:
      out.kind = Tree::Kind::Comp;
      out.name = std::string(store.symbol_name(store.symbol(t)));
      for (Term a : store.args(t)) out.args.push_back(to_tree(store, a));
      break;
  }
  return out;
}

Tree var(std::string name) { return Tree{Tree::Kind::Var, std::move(name), 0, {}}; }
Tree atom(std::string name) { return Tree{Tree::Kind::Atom, std::move(name), 0, {}}; }
Tree comp(std::string name, std::vector<Tree> args) {
  return Tree{Tree::Kind::Comp, std::move(name), 0, std::move(args)};
}

bool is_ground(const Tree& t) {
  if (t.is_var()) return false;
  for (const Tree& a : t.args) {
    if (!is_ground(a)) return false;
  }
  return true;
}

void variables(const Tree& t, std::vector<std::string>& out) {
  if (t.is_var()) {
    out.push_back(t.name);
    return;
  }
  for (const Tree& a : t.args) variables(a, out);
}

Tree apply(const Subst& s, const Tree& t) {
  if (t.is_var()) {
    auto it = s.find(t.name);
    return it == s.end() ? t : oracle::apply(s, it->second);
  }
  Tree out = t;
  for (Tree& a : out.args) a = oracle::apply(s, a);
  return out;
}

namespace {

bool occurs(const std::string& v, const Tree& t) {
  if (t.is_var()) return t.name == v;
  for (const Tree& a : t.args) {
    if (occurs(v, a)) return true;
  }
  return false;
}

}  // namespace

std::optional<Subst> unify(const Tree& a, const Tree& b) {
  Subst s;
  std::vector<std::pair<Tree, Tree>> eqs;
  eqs.emplace_back(a, b);
  while (!eqs.empty()) {
    auto [x, y] = eqs.back();
    eqs.pop_back();
    x = oracle::apply(s, x);
    y = oracle::apply(s, y);
    if (x == y) continue;
    if (!x.is_var() && y.is_var()) std::swap(x, y);
    if (x.is_var()) {
      if (occurs(x.name, y)) return std::nullopt;
      Subst single{{x.name, y}};
      for (auto& [k, v] : s) v = oracle::apply(single, v);
      s[x.name] = y;
      continue;
    }
    if (x.kind != y.kind || x.name != y.name || x.value != y.value || x.args.size() != y.args.size()) {
      return std::nullopt;
    }
    for (std::size_t i = 0; i < x.args.size(); ++i) eqs.emplace_back(x.args[i], y.args[i]);
  }
  return s;
}

bool match(const Tree& pattern, const Tree& ground, Subst& s) {
  if (pattern.is_var()) {
    auto it = s.find(pattern.name);
    if (it != s.end()) return it->second == ground;
    s.emplace(pattern.name, ground);
    return true;
  }
  if (pattern.kind != ground.kind || pattern.name != ground.name || pattern.value != ground.value ||
      pattern.args.size() != ground.args.size()) {
    return false;
  }
  for (std::size_t i = 0; i < pattern.args.size(); ++i) {
    if (!match(pattern.args[i], ground.args[i], s)) return false;
  }
  return true;
}

bool is_variant(const Tree& a, const Tree& b) {
  std::map<std::string, std::string> fwd;
  std::map<std::string, std::string> back;
  std::function<bool(const Tree&, const Tree&)> walk = [&](const Tree& x, const Tree& y) {
    if (x.is_var() != y.is_var()) return false;
    if (x.is_var()) {
      auto [f, fi] = fwd.emplace(x.name, y.name);
      auto [r, ri] = back.emplace(y.name, x.name);
      return f->second == y.name && r->second == x.name;
    }
    if (x.kind != y.kind || x.name != y.name || x.value != y.value || x.args.size() != y.args.size()) return false;
    for (std::size_t i = 0; i < x.args.size(); ++i) {
      if (!walk(x.args[i], y.args[i])) return false;
    }
    return true;
  };
  return walk(a, b);
}

}  // namespace ru::oracle
