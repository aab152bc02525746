#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ru {

enum class Opcode : std::uint8_t {
  Illegal = 0x00,
  Perceive = 0x01,
  Infer = 0x02,
  Unify = 0x03,
  Plan = 0x04,
  Believe = 0x05,
  Commit = 0x06,
  LoadT = 0x07,
  Mov = 0x08,
  GPush = 0x09,
  GPop = 0x0A,
  Next = 0x0B,
  Brs = 0x0C,
  Brk = 0x0D,
  Jmp = 0x0E,
  Send = 0x0F,
  Recv = 0x10,
  Neural = 0x11,
  Yield = 0x12,
  Halt = 0x13,
};

inline constexpr std::size_t kOpcodeCount = 19;
inline constexpr std::array<Opcode, kOpcodeCount> kAllOpcodes = {
    Opcode::Perceive, Opcode::Infer, Opcode::Unify, Opcode::Plan,  Opcode::Believe, Opcode::Commit, Opcode::LoadT,
    Opcode::Mov,      Opcode::GPush, Opcode::GPop,  Opcode::Next,  Opcode::Brs,     Opcode::Brk,    Opcode::Jmp,
    Opcode::Send,     Opcode::Recv,  Opcode::Neural, Opcode::Yield, Opcode::Halt};

std::string_view mnemonic(Opcode op);
std::optional<Opcode> opcode_from_mnemonic(std::string_view text);

enum class RegClass : std::uint8_t { B = 0, G = 1, C = 2, A = 3 };

inline constexpr std::uint8_t register_count(RegClass c) {
  switch (c) {
    case RegClass::B: return 16;
    case RegClass::G: return 8;
    case RegClass::C: return 4;
    case RegClass::A: return 8;
  }
  return 0;
}
char class_letter(RegClass c);

enum class MessageKind : std::uint8_t { Belief = 0, Goal = 1, Action = 2, Contract = 3 };
std::string_view to_string(MessageKind k);
std::optional<MessageKind> message_kind_from(std::string_view text);

enum class OperandKind : std::uint8_t { None, Reg, Imm8, Literal, Label, Agent, Kind };

struct Operand {
  OperandKind kind = OperandKind::None;
  RegClass cls = RegClass::B;
  // Register index, immediate, literal index, instruction index, agent id or
  // message kind depending on `kind`.
  std::uint32_t value = 0;

  static Operand reg(RegClass c, std::uint32_t i) { return {OperandKind::Reg, c, i}; }
  static Operand imm(std::uint32_t v) { return {OperandKind::Imm8, RegClass::B, v}; }
  static Operand literal(std::uint32_t i) { return {OperandKind::Literal, RegClass::B, i}; }
  static Operand label(std::uint32_t target) { return {OperandKind::Label, RegClass::B, target}; }
  static Operand agent(std::uint32_t id) { return {OperandKind::Agent, RegClass::B, id}; }
  static Operand msg_kind(MessageKind k) { return {OperandKind::Kind, RegClass::B, static_cast<std::uint32_t>(k)}; }

  friend bool operator==(const Operand&, const Operand&) = default;
};

struct Instruction {
  Opcode op = Opcode::Illegal;
  std::array<Operand, 3> operands{};

  std::size_t operand_count() const;
  friend bool operator==(const Instruction&, const Instruction&) = default;
};

// One operand slot: the kind it takes and, for registers, the allowed
// classes as a bit mask over RegClass.
struct SlotSpec {
  OperandKind kind = OperandKind::None;
  std::uint8_t classes = 0;
};

struct Signature {
  std::array<SlotSpec, 3> slots{};
  std::size_t arity = 0;
};

// Throws std::invalid_argument for Illegal.
const Signature& signature(Opcode op);

// Checks operands against the signature (including MOV's class pairing).
// Returns an error message, or empty when the instruction is well formed.
std::string check_operands(const Instruction& ins);

// 64-bit word: byte 0 opcode, bytes 1-3 operand descriptors, bytes 4-7 the
// wide field (literal index, branch target or agent id). Register
// descriptors are 0x80 | class << 4 | index; immediates and message kinds
// sit in their descriptor byte; the wide operand's descriptor byte is 0.
std::uint64_t encode(const Instruction& ins);
// Any word that is not the encoding of a legal instruction decodes to
// Opcode::Illegal.
Instruction decode(std::uint64_t word);

class ProgramError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Program {
  std::vector<Instruction> code;
  // Canonical term text, one entry per literal index.
  std::vector<std::string> literals;
  std::uint32_t entry = 0;

  // Structural equality: code, literal pool and entry point.
  friend bool operator==(const Program&, const Program&) = default;
};

// Throws ProgramError for out-of-range targets, literals or entry point, or
// operands that do not match the signature table.
void validate_program(const Program& p);
// Stable digest of code, literals and entry.
std::uint64_t fingerprint(const Program& p);

std::string format_instruction(const Instruction& ins);

}  // namespace ru
