#pragma once

#include <cstdint>
#include <string>

#include "ru/isa/isa.hpp"
#include "ru/machine/cache.hpp"
#include "ru/util/hash.hpp"

namespace ru {

enum class Stage : std::uint8_t { Perceive = 0, Reason = 1, Act = 2, State = 3, Memory = 4, Writeback = 5 };
inline constexpr std::size_t kStageCount = 6;

const char* to_string(Stage s);

enum class Stall : std::uint8_t {
  None = 0,
  Hazard,      // waiting for an older instruction to retire a register
  Busy,        // next stage still occupied
  Recv,        // RECV with an empty mailbox
  Neural,      // neural trap outstanding
};

const char* to_string(Stall s);

struct TraceEvent {
  std::uint64_t cycle = 0;
  Stage stage = Stage::Perceive;
  std::uint32_t pc = 0;
  Opcode opcode = Opcode::Illegal;
  // Bit 0 = S, bit 1 = K, as of the end of the cycle's stage actions.
  std::uint8_t flags = 0;
  MemLevel mem_level = MemLevel::None;
  Stall stall = Stall::None;

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

void hash_event(Fnv1a& h, const TraceEvent& e);
// One JSON object, no trailing newline.
std::string to_json_line(const TraceEvent& e);

}  // namespace ru
