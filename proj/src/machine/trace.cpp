#include "ru/machine/trace.hpp"

#include "json.hpp"

namespace ru {

const char* to_string(Stage s) {
  switch (s) {
    case Stage::Perceive: return "perceive";
    case Stage::Reason: return "reason";
    case Stage::Act: return "act";
    case Stage::State: return "state";
    case Stage::Memory: return "memory";
    case Stage::Writeback: return "writeback";
  }
  return "?";
}

const char* to_string(Stall s) {
  switch (s) {
    case Stall::None: return "none";
    case Stall::Hazard: return "hazard";
    case Stall::Busy: return "busy";
    case Stall::Recv: return "recv";
    case Stall::Neural: return "neural";
  }
  return "?";
}

void hash_event(Fnv1a& h, const TraceEvent& e) {
  h.add_u64(e.cycle);
  h.add_byte(static_cast<std::uint8_t>(e.stage));
  h.add_u64(e.pc);
  h.add_byte(static_cast<std::uint8_t>(e.opcode));
  h.add_byte(e.flags);
  h.add_byte(static_cast<std::uint8_t>(e.mem_level));
  h.add_byte(static_cast<std::uint8_t>(e.stall));
}

std::string to_json_line(const TraceEvent& e) {
  nlohmann::ordered_json j;
  j["cycle"] = e.cycle;
  j["stage"] = to_string(e.stage);
  j["pc"] = e.pc;
  j["opcode"] = std::string(mnemonic(e.opcode));
  j["flags"] = e.flags;
  j["mem_level"] = to_string(e.mem_level);
  j["stall"] = to_string(e.stall);
  return j.dump();
}

}  // namespace ru
