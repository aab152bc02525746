#include "ru/isa/assembler.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <unordered_map>
#include <vector>

#include "ru/term/parser.hpp"
#include "ru/term/term.hpp"

namespace ru {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

// Leading `name:` if present.
std::optional<std::string_view> take_label(std::string_view& line) {
  std::size_t i = 0;
  if (line.empty() || !is_ident_start(line[0])) return std::nullopt;
  while (i < line.size() && is_ident_char(line[i])) ++i;
  std::size_t j = i;
  while (j < line.size() && (line[j] == ' ' || line[j] == '\t')) ++j;
  if (j >= line.size() || line[j] != ':') return std::nullopt;
  auto name = line.substr(0, i);
  line = trim(line.substr(j + 1));
  return name;
}

std::vector<std::string_view> split_operands(std::string_view s, std::size_t line) {
  std::vector<std::string_view> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (c == '(' || c == '{') ++depth;
    if (c == ')' || c == '}') --depth;
    if (depth < 0) throw AsmError(line, "unbalanced brackets in operands");
    if (c == ',' && depth == 0) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  if (depth != 0) throw AsmError(line, "unbalanced brackets in operands");
  auto last = trim(s.substr(start));
  if (!last.empty() || !out.empty()) out.push_back(last);
  for (auto o : out) {
    if (o.empty()) throw AsmError(line, "empty operand");
  }
  return out;
}

template <typename T>
std::optional<T> parse_uint(std::string_view s) {
  T v{};
  if (s.empty()) return std::nullopt;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

struct Line {
  std::size_t number;
  std::string_view text;
};

class Assembler {
public:
  explicit Assembler(std::string_view source) : source_(source) {}

  Program run() {
    first_pass();
    Program p;
    p.entry = entry_;
    for (const Line& l : code_lines_) p.code.push_back(encode_line(l));
    p.literals = literals_;
    validate_program(p);
    return p;
  }

private:
  void first_pass() {
    enum class Section { Code, Lits } section = Section::Code;
    std::optional<std::pair<std::size_t, std::string>> entry_label;
    std::size_t number = 0;
    std::size_t pos = 0;
    while (pos <= source_.size()) {
      std::size_t nl = source_.find('\n', pos);
      if (nl == std::string_view::npos) nl = source_.size();
      std::string_view raw = source_.substr(pos, nl - pos);
      pos = nl + 1;
      ++number;
      if (auto sc = raw.find(';'); sc != std::string_view::npos) raw = raw.substr(0, sc);
      std::string_view line = trim(raw);
      if (line.empty()) continue;

      if (line[0] == '.') {
        auto word_end = line.find_first_of(" \t");
        auto directive = line.substr(0, word_end);
        auto rest = word_end == std::string_view::npos ? std::string_view{} : trim(line.substr(word_end));
        if (directive == ".lits") {
          section = Section::Lits;
        } else if (directive == ".code") {
          section = Section::Code;
        } else if (directive == ".entry") {
          if (rest.empty()) throw AsmError(number, ".entry needs a label");
          entry_label = std::pair(number, std::string(rest));
        } else {
          throw AsmError(number, "unknown directive " + std::string(directive));
        }
        if (directive != ".entry" && !rest.empty()) throw AsmError(number, "unexpected text after directive");
        continue;
      }

      if (section == Section::Lits) {
        auto name = take_label(line);
        if (!name) throw AsmError(number, "expected 'name: term.' in .lits");
        if (lit_names_.count(std::string(*name))) throw AsmError(number, "duplicate literal name " + std::string(*name));
        lit_names_.emplace(std::string(*name), add_literal(line, number));
        continue;
      }

      while (auto label = take_label(line)) {
        std::string key(*label);
        if (labels_.count(key)) throw AsmError(number, "duplicate label " + key);
        labels_.emplace(key, static_cast<std::uint32_t>(code_lines_.size()));
        if (line.empty()) break;
      }
      if (!line.empty()) code_lines_.push_back(Line{number, line});
    }
    if (entry_label) {
      auto it = labels_.find(entry_label->second);
      if (it == labels_.end()) throw AsmError(entry_label->first, "unresolved label " + entry_label->second);
      entry_ = it->second;
    }
  }

  std::uint32_t add_literal(std::string_view text, std::size_t line) {
    Term t;
    try {
      t = parse_term(store_, text);
    } catch (const ParseError& e) {
      throw AsmError(line, std::string("bad literal: ") + e.what());
    }
    auto [it, inserted] = lit_index_.try_emplace(t, static_cast<std::uint32_t>(literals_.size()));
    if (inserted) literals_.push_back(store_.to_string(t));
    return it->second;
  }

  Operand parse_operand(std::string_view text, const SlotSpec& spec, std::size_t line, std::string_view op) {
    const std::string ctx = std::string(op) + " operand '" + std::string(text) + "'";
    switch (spec.kind) {
      case OperandKind::Reg: {
        const char c = static_cast<char>(std::toupper(static_cast<unsigned char>(text[0])));
        std::optional<RegClass> cls;
        if (c == 'B') cls = RegClass::B;
        if (c == 'G') cls = RegClass::G;
        if (c == 'C') cls = RegClass::C;
        if (c == 'A') cls = RegClass::A;
        auto idx = parse_uint<std::uint32_t>(text.substr(1));
        if (!cls || !idx) throw AsmError(line, ctx + ": expected a register");
        if (*idx >= register_count(*cls)) throw AsmError(line, ctx + ": bad register");
        if (!(spec.classes & (1U << static_cast<unsigned>(*cls)))) {
          throw AsmError(line, ctx + ": register class not allowed here");
        }
        return Operand::reg(*cls, *idx);
      }
      case OperandKind::Imm8: {
        if (text.find('.') != std::string_view::npos) {
          double v{};
          auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
          if (ec != std::errc{} || ptr != text.data() + text.size() || v < 0.0 || v > 1.0) {
            throw AsmError(line, ctx + ": expected 0-255 or a decimal in [0, 1]");
          }
          return Operand::imm(static_cast<std::uint32_t>(std::lround(v * 255.0)));
        }
        auto v = parse_uint<std::uint32_t>(text);
        if (!v || *v > 255) throw AsmError(line, ctx + ": expected 0-255 or a decimal in [0, 1]");
        return Operand::imm(*v);
      }
      case OperandKind::Literal: {
        if (text.front() == '{') {
          if (text.back() != '}') throw AsmError(line, ctx + ": unterminated inline literal");
          return Operand::literal(add_literal(text.substr(1, text.size() - 2), line));
        }
        auto it = lit_names_.find(std::string(text));
        if (it == lit_names_.end()) throw AsmError(line, ctx + ": unknown literal");
        return Operand::literal(it->second);
      }
      case OperandKind::Label: {
        auto it = labels_.find(std::string(text));
        if (it == labels_.end()) throw AsmError(line, "unresolved label " + std::string(text));
        return Operand::label(it->second);
      }
      case OperandKind::Agent: {
        auto v = parse_uint<std::uint32_t>(text);
        if (!v) throw AsmError(line, ctx + ": expected an agent id");
        return Operand::agent(*v);
      }
      case OperandKind::Kind: {
        auto k = message_kind_from(text);
        if (!k) throw AsmError(line, ctx + ": expected belief, goal, action or contract");
        return Operand::msg_kind(*k);
      }
      case OperandKind::None:
        break;
    }
    throw AsmError(line, ctx + ": unexpected operand");
  }

  Instruction encode_line(const Line& l) {
    std::string_view text = l.text;
    std::size_t i = 0;
    while (i < text.size() && is_ident_char(text[i])) ++i;
    const auto name = text.substr(0, i);
    auto op = opcode_from_mnemonic(name);
    if (!op) throw AsmError(l.number, "unknown opcode " + std::string(name));
    const Signature& sig = signature(*op);
    auto operands = split_operands(trim(text.substr(i)), l.number);
    if (operands.size() != sig.arity) {
      throw AsmError(l.number, std::string(mnemonic(*op)) + " expects " + std::to_string(sig.arity) +
                                   " operands, got " + std::to_string(operands.size()));
    }
    Instruction ins;
    ins.op = *op;
    for (std::size_t k = 0; k < operands.size(); ++k) {
      ins.operands[k] = parse_operand(operands[k], sig.slots[k], l.number, mnemonic(*op));
    }
    if (auto err = check_operands(ins); !err.empty()) throw AsmError(l.number, err);
    return ins;
  }

  std::string_view source_;
  TermStore store_;
  std::vector<std::string> literals_;
  std::unordered_map<Term, std::uint32_t> lit_index_;
  std::unordered_map<std::string, std::uint32_t> lit_names_;
  std::unordered_map<std::string, std::uint32_t> labels_;
  std::vector<Line> code_lines_;
  std::uint32_t entry_ = 0;
};

}  // namespace

Program assemble(std::string_view source) { return Assembler(source).run(); }

}  // namespace ru
