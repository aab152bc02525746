#include "ru/isa/assembler.hpp"

namespace ru {
namespace {

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

class Reader {
public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  std::uint64_t take(int n) {
    if (pos_ + static_cast<std::size_t>(n) > bytes_.size()) throw ProgramError("truncated .rub file");
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= std::uint64_t{static_cast<unsigned char>(bytes_[pos_++])} << (8 * i);
    return v;
  }
  std::string_view take_bytes(std::size_t n) {
    if (pos_ + n > bytes_.size()) throw ProgramError("truncated .rub file");
    auto s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  bool done() const { return pos_ == bytes_.size(); }

private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string write_rub(const Program& program) {
  std::string out = "RUB1";
  put_u32(out, program.entry);
  put_u32(out, static_cast<std::uint32_t>(program.literals.size()));
  for (const auto& lit : program.literals) {
    put_u32(out, static_cast<std::uint32_t>(lit.size()));
    out += lit;
  }
  put_u32(out, static_cast<std::uint32_t>(program.code.size()));
  for (const auto& ins : program.code) put_u64(out, ins.op == Opcode::Illegal ? 0 : encode(ins));
  return out;
}

Program read_rub(std::string_view bytes) {
  Reader r(bytes);
  if (r.take_bytes(4) != "RUB1") throw ProgramError("bad magic, expected RUB1");
  Program p;
  p.entry = static_cast<std::uint32_t>(r.take(4));
  const auto nlits = static_cast<std::uint32_t>(r.take(4));
  for (std::uint32_t i = 0; i < nlits; ++i) {
    const auto len = static_cast<std::size_t>(r.take(4));
    p.literals.emplace_back(r.take_bytes(len));
  }
  const auto ncode = static_cast<std::uint32_t>(r.take(4));
  for (std::uint32_t i = 0; i < ncode; ++i) p.code.push_back(decode(r.take(8)));
  if (!r.done()) throw ProgramError("trailing bytes after code block");
  validate_program(p);
  return p;
}

}  // namespace ru
