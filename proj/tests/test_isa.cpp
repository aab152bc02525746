#include <gtest/gtest.h>

#include "ru/isa/assembler.hpp"
#include "ru/isa/isa.hpp"
#include "ru/util/rng.hpp"

using namespace ru;

TEST(Assembler, SingleHalt) {
  const Program p = assemble(".code\nHALT\n");
  ASSERT_EQ(p.code.size(), 1u);
  EXPECT_EQ(p.code[0].op, Opcode::Halt);
  EXPECT_EQ(disassemble(p), ".code\n    HALT\n");
}

TEST(Assembler, UnifyOperands) {
  const Program p = assemble(".code\nUNIFY C0, B1, B2\nHALT\n");
  const Instruction& i = p.code[0];
  EXPECT_EQ(i.op, Opcode::Unify);
  EXPECT_EQ(i.operands[0], Operand::reg(RegClass::C, 0));
  EXPECT_EQ(i.operands[1], Operand::reg(RegClass::B, 1));
  EXPECT_EQ(i.operands[2], Operand::reg(RegClass::B, 2));
}

TEST(Assembler, Errors) {
  EXPECT_THROW(assemble(".code\nBRS missing_label\nHALT\n"), AsmError);
  EXPECT_THROW(assemble(".code\nFLY B0\n"), AsmError);
  EXPECT_THROW(assemble(".code\nUNIFY B0, B1, B2\n"), AsmError);
  EXPECT_THROW(assemble(".code\nLOADT B0, nolit\n"), AsmError);
  EXPECT_THROW(assemble(".code\nBELIEVE B0, 256\n"), AsmError);
  EXPECT_THROW(assemble(".code\nMOV B16, B0\n"), AsmError);
  try {
    assemble(".code\nHALT\nJMP x\n");
    FAIL();
  } catch (const AsmError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(Assembler, LiteralsAreCanonicalAndDeduplicated) {
  const Program p = assemble(
      ".lits\n"
      "a: f(X,   b).\n"
      "b: f(X, b).\n"
      ".code\n"
      "LOADT B0, a\nLOADT B1, b\nHALT\n");
  ASSERT_EQ(p.literals.size(), 1u);
  EXPECT_EQ(p.code[0].operands[1], p.code[1].operands[1]);
  const std::string text = disassemble(p);
  EXPECT_NE(text.find(".lits"), std::string::npos);
  EXPECT_EQ(assemble(text), p);
}

TEST(Assembler, Comments) {
  const Program p = assemble("; header\n.code ; trailing\n  HALT ; done\n");
  EXPECT_EQ(p.code.size(), 1u);
}

TEST(Codec, HaltWord) {
  Instruction halt;
  halt.op = Opcode::Halt;
  EXPECT_EQ(encode(halt), 0x13u);
  EXPECT_EQ(decode(0x13), halt);
}

TEST(Codec, IllegalWords) {
  EXPECT_EQ(decode(~std::uint64_t{0}).op, Opcode::Illegal);
  EXPECT_EQ(decode(0).op, Opcode::Illegal);
  // HALT with a stray operand byte.
  EXPECT_EQ(decode(0x0113).op, Opcode::Illegal);
}

TEST(Codec, EncodeRejectsBadOperands) {
  Instruction i;
  i.op = Opcode::Unify;
  i.operands = {Operand::reg(RegClass::B, 0), Operand::reg(RegClass::B, 1), Operand::reg(RegClass::B, 2)};
  EXPECT_THROW(encode(i), std::invalid_argument);
}

// decode(encode(x)) = x for random legal operands of every opcode.
TEST(CodecProperty, RoundTrip) {
  Rng rng(2024);
  for (Opcode op : kAllOpcodes) {
    const Signature& sig = signature(op);
    int done = 0;
    for (int tries = 0; done < 1000 && tries < 100000; ++tries) {
      Instruction ins;
      ins.op = op;
      for (std::size_t k = 0; k < sig.arity; ++k) {
        Operand& o = ins.operands[k];
        o.kind = sig.slots[k].kind;
        if (o.kind == OperandKind::Reg) {
          std::vector<RegClass> allowed;
          for (unsigned c = 0; c < 4; ++c)
            if (sig.slots[k].classes & (1U << c)) allowed.push_back(static_cast<RegClass>(c));
          o.cls = allowed[rng.below(allowed.size())];
          o.value = static_cast<std::uint32_t>(rng.below(16));
        } else if (o.kind == OperandKind::Imm8) {
          o.value = static_cast<std::uint32_t>(rng.below(256));
        } else if (o.kind == OperandKind::Kind) {
          o.value = static_cast<std::uint32_t>(rng.below(4));
        } else {
          o.value = static_cast<std::uint32_t>(rng.next_u64());
        }
      }
      if (!check_operands(ins).empty()) continue;
      ++done;
      const std::uint64_t w = encode(ins);
      ASSERT_EQ(decode(w), ins) << format_instruction(ins);
      ASSERT_EQ(encode(decode(w)), w);
    }
    EXPECT_EQ(done, 1000) << mnemonic(op);
  }
}

TEST(Binary, RoundTrip) {
  const Program p = assemble(
      ".lits\ng: ancestor(tom, X).\n.code\n  LOADT B0, g\n  INFER B1, B0\nloop:\n  BRS done\n  JMP loop\ndone:\n  "
      "SEND 3, B1, contract\n  HALT\n");
  const std::string bytes = write_rub(p);
  EXPECT_EQ(bytes.substr(0, 4), "RUB1");
  EXPECT_EQ(read_rub(bytes), p);
}

TEST(Binary, BadInput) {
  EXPECT_THROW(read_rub("NOPE"), ProgramError);
  const std::string bytes = write_rub(assemble(".code\nHALT\n"));
  EXPECT_THROW(read_rub(bytes.substr(0, bytes.size() - 1)), ProgramError);
}

TEST(Program, Validation) {
  Program p;
  Instruction jmp;
  jmp.op = Opcode::Jmp;
  jmp.operands[0] = Operand::label(5);
  p.code.push_back(jmp);
  EXPECT_THROW(validate_program(p), ProgramError);
}
