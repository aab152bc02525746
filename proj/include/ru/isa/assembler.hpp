#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "ru/isa/isa.hpp"

namespace ru {

class AsmError : public std::runtime_error {
public:
  AsmError(std::size_t line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}
  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

// Two-pass assembler for `.rua` text.
//
//   .entry start          ; optional, defaults to instruction 0
//   .lits
//   goal: ancestor(tom, X).
//   .code
//   start: LOADT B0, goal
//          INFER B1, B0
//          BRS done
//   done:  BELIEVE B1, 0.9
//          HALT
//
// Literal operands are `.lits` names or inline `{term}`. Immediates are an
// integer 0-255 or a decimal in [0, 1], scaled by 255 and rounded.
Program assemble(std::string_view source);

// Canonical text: literals as k<i>, labels as L<instruction index>.
std::string disassemble(const Program& program);

// `.rub` container: "RUB1", u32 entry, u32 literal count, each literal as
// u32 length + bytes, u32 instruction count, then the 64-bit words. All
// integers little-endian.
std::string write_rub(const Program& program);
// Throws ProgramError on a malformed container.
Program read_rub(std::string_view bytes);

}  // namespace ru
