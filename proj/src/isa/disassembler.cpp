#include <set>
#include <sstream>

#include "ru/isa/assembler.hpp"

namespace ru {

std::string disassemble(const Program& program) {
  std::set<std::uint32_t> targets;
  for (const auto& ins : program.code) {
    for (const auto& o : ins.operands) {
      if (o.kind == OperandKind::Label) targets.insert(o.value);
    }
  }
  if (program.entry != 0) targets.insert(program.entry);

  std::ostringstream os;
  if (program.entry != 0) os << ".entry L" << program.entry << '\n';
  if (!program.literals.empty()) {
    os << ".lits\n";
    for (std::size_t i = 0; i < program.literals.size(); ++i) os << 'k' << i << ": " << program.literals[i] << ".\n";
  }
  os << ".code\n";
  for (std::uint32_t pc = 0; pc < program.code.size(); ++pc) {
    if (targets.count(pc)) os << 'L' << pc << ":\n";
    os << "    " << format_instruction(program.code[pc]) << '\n';
  }
  return os.str();
}

}  // namespace ru
