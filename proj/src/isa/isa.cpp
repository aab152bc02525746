#include "ru/isa/isa.hpp"

#include <cctype>

#include "ru/util/hash.hpp"

namespace ru {
namespace {

constexpr std::uint8_t mask(RegClass c) { return static_cast<std::uint8_t>(1U << static_cast<unsigned>(c)); }
constexpr std::uint8_t kB = mask(RegClass::B);
constexpr std::uint8_t kG = mask(RegClass::G);
constexpr std::uint8_t kC = mask(RegClass::C);
constexpr std::uint8_t kA = mask(RegClass::A);

constexpr SlotSpec reg(std::uint8_t classes) { return {OperandKind::Reg, classes}; }
constexpr SlotSpec slot(OperandKind k) { return {k, 0}; }

Signature sig(std::initializer_list<SlotSpec> slots) {
  Signature s;
  for (const SlotSpec& sp : slots) s.slots[s.arity++] = sp;
  return s;
}

struct Entry {
  Opcode op;
  std::string_view name;
  Signature sig;
};

const std::array<Entry, kOpcodeCount>& table() {
  static const std::array<Entry, kOpcodeCount> t = {{
      {Opcode::Perceive, "PERCEIVE", sig({reg(kB), slot(OperandKind::Imm8), slot(OperandKind::Literal)})},
      {Opcode::Infer, "INFER", sig({reg(kB), reg(kB)})},
      {Opcode::Unify, "UNIFY", sig({reg(kC), reg(kB), reg(kB)})},
      {Opcode::Plan, "PLAN", sig({reg(kA), reg(kG)})},
      {Opcode::Believe, "BELIEVE", sig({reg(kB), slot(OperandKind::Imm8)})},
      {Opcode::Commit, "COMMIT", sig({reg(kA)})},
      {Opcode::LoadT, "LOADT", sig({reg(kB | kG), slot(OperandKind::Literal)})},
      {Opcode::Mov, "MOV", sig({reg(kB | kG | kC | kA), reg(kB | kG | kC | kA)})},
      {Opcode::GPush, "GPUSH", sig({reg(kG), slot(OperandKind::Imm8)})},
      {Opcode::GPop, "GPOP", sig({reg(kG)})},
      {Opcode::Next, "NEXT", sig({reg(kB)})},
      {Opcode::Brs, "BRS", sig({slot(OperandKind::Label)})},
      {Opcode::Brk, "BRK", sig({slot(OperandKind::Label)})},
      {Opcode::Jmp, "JMP", sig({slot(OperandKind::Label)})},
      {Opcode::Send, "SEND", sig({slot(OperandKind::Agent), reg(kB | kG | kA), slot(OperandKind::Kind)})},
      {Opcode::Recv, "RECV", sig({reg(kB)})},
      {Opcode::Neural, "NEURAL", sig({reg(kB), reg(kB), reg(kB)})},
      {Opcode::Yield, "YIELD", sig({})},
      {Opcode::Halt, "HALT", sig({})},
  }};
  return t;
}

const Entry* lookup(Opcode op) {
  const auto v = static_cast<unsigned>(op);
  if (v == 0 || v > kOpcodeCount) return nullptr;
  return &table()[v - 1];
}

}  // namespace

std::string_view mnemonic(Opcode op) {
  const Entry* e = lookup(op);
  return e ? e->name : "ILLEGAL";
}

std::optional<Opcode> opcode_from_mnemonic(std::string_view text) {
  std::string upper(text);
  for (char& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  for (const Entry& e : table()) {
    if (e.name == upper) return e.op;
  }
  return std::nullopt;
}

char class_letter(RegClass c) { return "BGCA"[static_cast<unsigned>(c)]; }

std::string_view to_string(MessageKind k) {
  switch (k) {
    case MessageKind::Belief: return "belief";
    case MessageKind::Goal: return "goal";
    case MessageKind::Action: return "action";
    case MessageKind::Contract: return "contract";
  }
  return "?";
}

std::optional<MessageKind> message_kind_from(std::string_view text) {
  for (auto k : {MessageKind::Belief, MessageKind::Goal, MessageKind::Action, MessageKind::Contract}) {
    if (to_string(k) == text) return k;
  }
  return std::nullopt;
}

std::size_t Instruction::operand_count() const {
  std::size_t n = 0;
  while (n < operands.size() && operands[n].kind != OperandKind::None) ++n;
  return n;
}

const Signature& signature(Opcode op) {
  const Entry* e = lookup(op);
  if (!e) throw std::invalid_argument("no signature for illegal opcode");
  return e->sig;
}

std::string check_operands(const Instruction& ins) {
  const Entry* e = lookup(ins.op);
  if (!e) return "illegal opcode";
  const Signature& s = e->sig;
  for (std::size_t i = 0; i < 3; ++i) {
    const Operand& o = ins.operands[i];
    if (i >= s.arity) {
      if (o.kind != OperandKind::None) return std::string(e->name) + " takes " + std::to_string(s.arity) + " operands";
      continue;
    }
    const SlotSpec& sp = s.slots[i];
    const std::string where = std::string(e->name) + " operand " + std::to_string(i + 1);
    if (o.kind != sp.kind) return where + " has the wrong kind";
    switch (o.kind) {
      case OperandKind::Reg:
        if (!(sp.classes & mask(o.cls))) return where + ": register class " + class_letter(o.cls) + " not allowed";
        if (o.value >= register_count(o.cls)) return where + ": register index out of range";
        break;
      case OperandKind::Imm8:
        if (o.value > 0xFF) return where + ": immediate exceeds 255";
        break;
      case OperandKind::Kind:
        if (o.value > 3) return where + ": unknown message kind";
        break;
      default:
        break;
    }
  }
  if (ins.op == Opcode::Mov) {
    const RegClass a = ins.operands[0].cls;
    const RegClass b = ins.operands[1].cls;
    const bool term_regs = (a == RegClass::B || a == RegClass::G) && (b == RegClass::B || b == RegClass::G);
    if (a != b && !term_regs) return "MOV needs registers of the same class (or B and G)";
  }
  return {};
}

std::uint64_t encode(const Instruction& ins) {
  if (auto err = check_operands(ins); !err.empty()) throw std::invalid_argument("cannot encode: " + err);
  std::uint64_t word = static_cast<std::uint8_t>(ins.op);
  for (std::size_t i = 0; i < 3; ++i) {
    const Operand& o = ins.operands[i];
    std::uint64_t byte = 0;
    switch (o.kind) {
      case OperandKind::Reg:
        byte = 0x80U | (static_cast<unsigned>(o.cls) << 4) | o.value;
        break;
      case OperandKind::Imm8:
      case OperandKind::Kind:
        byte = o.value;
        break;
      case OperandKind::Literal:
      case OperandKind::Label:
      case OperandKind::Agent:
        word |= std::uint64_t{o.value} << 32;
        break;
      case OperandKind::None:
        break;
    }
    word |= byte << (8 * (i + 1));
  }
  return word;
}

Instruction decode(std::uint64_t word) {
  const Instruction illegal{};
  const auto op = static_cast<Opcode>(word & 0xFF);
  const Entry* e = lookup(op);
  if (!e) return illegal;
  Instruction ins;
  ins.op = op;
  bool has_wide = false;
  const auto wide_field = static_cast<std::uint32_t>(word >> 32);
  for (std::size_t i = 0; i < 3; ++i) {
    const auto byte = static_cast<std::uint8_t>(word >> (8 * (i + 1)));
    if (i >= e->sig.arity) {
      if (byte != 0) return illegal;
      continue;
    }
    const SlotSpec& sp = e->sig.slots[i];
    Operand& o = ins.operands[i];
    o.kind = sp.kind;
    switch (sp.kind) {
      case OperandKind::Reg:
        if (!(byte & 0x80) || (byte & 0x40)) return illegal;
        o.cls = static_cast<RegClass>((byte >> 4) & 0x3);
        o.value = byte & 0xF;
        break;
      case OperandKind::Imm8:
      case OperandKind::Kind:
        o.value = byte;
        break;
      default:
        if (byte != 0) return illegal;
        o.value = wide_field;
        has_wide = true;
        break;
    }
  }
  if (!has_wide && wide_field != 0) return illegal;
  if (!check_operands(ins).empty()) return illegal;
  return ins;
}

void validate_program(const Program& p) {
  for (std::size_t pc = 0; pc < p.code.size(); ++pc) {
    const Instruction& ins = p.code[pc];
    if (ins.op == Opcode::Illegal) continue;  // faults when executed
    if (auto err = check_operands(ins); !err.empty()) {
      throw ProgramError("instruction " + std::to_string(pc) + ": " + err);
    }
    for (const Operand& o : ins.operands) {
      if (o.kind == OperandKind::Label && o.value >= p.code.size()) {
        throw ProgramError("instruction " + std::to_string(pc) + ": branch target out of range");
      }
      if (o.kind == OperandKind::Literal && o.value >= p.literals.size()) {
        throw ProgramError("instruction " + std::to_string(pc) + ": literal index out of range");
      }
    }
  }
  if (!p.code.empty() && p.entry >= p.code.size()) throw ProgramError("entry point out of range");
}

std::uint64_t fingerprint(const Program& p) {
  Fnv1a h;
  h.add_u64(p.entry);
  h.add_u64(p.literals.size());
  for (const auto& lit : p.literals) {
    h.add_u64(lit.size());
    h.add(lit);
  }
  h.add_u64(p.code.size());
  for (const auto& ins : p.code) h.add_u64(ins.op == Opcode::Illegal ? 0 : encode(ins));
  return h.value();
}

std::string format_instruction(const Instruction& ins) {
  std::string out(mnemonic(ins.op));
  for (std::size_t i = 0; i < ins.operand_count(); ++i) {
    const Operand& o = ins.operands[i];
    out += i == 0 ? " " : ", ";
    switch (o.kind) {
      case OperandKind::Reg: out += class_letter(o.cls) + std::to_string(o.value); break;
      case OperandKind::Imm8: out += std::to_string(o.value); break;
      case OperandKind::Literal: out += "k" + std::to_string(o.value); break;
      case OperandKind::Label: out += "L" + std::to_string(o.value); break;
      case OperandKind::Agent: out += std::to_string(o.value); break;
      case OperandKind::Kind: out += to_string(static_cast<MessageKind>(o.value)); break;
      case OperandKind::None: break;
    }
  }
  return out;
}

}  // namespace ru
