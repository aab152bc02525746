#include "ru/machine/machine.hpp"

#include "ru/term/parser.hpp"

namespace ru {
namespace {

constexpr std::uint64_t bit(int id) { return std::uint64_t{1} << id; }

constexpr std::size_t kP = static_cast<std::size_t>(Stage::Perceive);
constexpr std::size_t kR = static_cast<std::size_t>(Stage::Reason);
constexpr std::size_t kA = static_cast<std::size_t>(Stage::Act);
constexpr std::size_t kW = static_cast<std::size_t>(Stage::Writeback);

std::uint64_t reg_bit(const Operand& o) { return bit(hazard_id(o.cls, o.value)); }

}  // namespace

const char* to_string(ActionStatus s) {
  switch (s) {
    case ActionStatus::Empty: return "empty";
    case ActionStatus::Planned: return "planned";
    case ActionStatus::Committed: return "committed";
    case ActionStatus::Failed: return "failed";
  }
  return "?";
}

const char* to_string(HaltReason r) {
  switch (r) {
    case HaltReason::Running: return "running";
    case HaltReason::Halted: return "halted";
    case HaltReason::Fault: return "fault";
  }
  return "?";
}

const char* to_string(RunOutcome o) {
  switch (o) {
    case RunOutcome::Halted: return "halted";
    case RunOutcome::Fault: return "fault";
    case RunOutcome::BudgetExhausted: return "budget_exhausted";
    case RunOutcome::Deadlock: return "deadlock";
  }
  return "?";
}

int hazard_id(RegClass c, std::uint32_t index) {
  switch (c) {
    case RegClass::B: return static_cast<int>(index);
    case RegClass::G: return 16 + static_cast<int>(index);
    case RegClass::C: return 24 + static_cast<int>(index);
    case RegClass::A: return 28 + static_cast<int>(index);
  }
  return 0;
}

std::pair<std::uint64_t, std::uint64_t> hazard_sets(const Instruction& ins) {
  const auto& o = ins.operands;
  const std::uint64_t flags = bit(kHazardFlags);
  const std::uint64_t bb = bit(kHazardBeliefs);
  const std::uint64_t gs = bit(kHazardGoals);
  switch (ins.op) {
    case Opcode::Perceive: return {0, reg_bit(o[0]) | flags};
    case Opcode::Infer: return {reg_bit(o[1]), reg_bit(o[0]) | bit(24) | flags};
    case Opcode::Unify: return {reg_bit(o[1]) | reg_bit(o[2]), reg_bit(o[0]) | flags};
    case Opcode::Plan: return {reg_bit(o[1]) | bb, reg_bit(o[0]) | flags};
    case Opcode::Believe: return {reg_bit(o[0]) | bb, bb | flags};
    case Opcode::Commit: return {reg_bit(o[0]) | bb, reg_bit(o[0]) | bb | flags};
    case Opcode::LoadT: return {0, reg_bit(o[0])};
    case Opcode::Mov: return {reg_bit(o[1]), reg_bit(o[0])};
    case Opcode::GPush: return {reg_bit(o[0]) | gs, gs};
    case Opcode::GPop: return {gs, reg_bit(o[0]) | gs | flags};
    case Opcode::Next: return {0, reg_bit(o[0]) | bit(24) | flags};
    case Opcode::Brs:
    case Opcode::Brk: return {flags, 0};
    case Opcode::Send: return {reg_bit(o[1]), flags};
    case Opcode::Recv: return {0, reg_bit(o[0]) | flags};
    case Opcode::Neural: return {reg_bit(o[1]) | reg_bit(o[2]), reg_bit(o[0]) | flags};
    case Opcode::Jmp:
    case Opcode::Yield:
    case Opcode::Halt:
    case Opcode::Illegal: return {0, 0};
  }
  return {0, 0};
}

Machine::Machine(const TermStore& host, std::shared_ptr<const Program> program, MachineContext ctx,
                 MachineConfig cfg)
    : program_(std::move(program)), fingerprint_(0), cfg_(cfg), neural_(std::move(ctx.neural)) {
  validate_program(*program_);
  fingerprint_ = fingerprint(*program_);
  state_.store = host;
  for (const std::string& text : program_->literals) state_.literals.push_back(parse_term(state_.store, text));
  state_.kb = std::move(ctx.kb);
  state_.domain = std::move(ctx.domain);
  state_.graph = std::move(ctx.graph);
  state_.objects = std::move(ctx.objects);
  for (auto& [id, items] : ctx.percepts) state_.percepts[id].items = std::move(items);
  state_.fetch_pc = program_->entry;
  state_.cache = CacheModel(cfg_);
  state_.rng = Rng(cfg_.seed);
  for (Term t : ctx.initial_beliefs) state_.beliefs.believe(state_.store, t, 1.0, Provenance::perceived(), 0);
}

void Machine::fetch() {
  InFlight f;
  f.seq = state_.next_seq++;
  f.pc = state_.fetch_pc;
  if (f.pc < program_->code.size()) {
    f.ins = program_->code[f.pc];
  } else {
    f.fault = true;
    f.fault_message = "execution ran past the end of the program";
  }
  std::tie(f.reads, f.writes) = hazard_sets(f.ins);
  state_.fetch_pc = f.pc + 1;
  state_.latches[kP] = std::move(f);
}

bool Machine::hazard(const InFlight& f) const {
  for (std::size_t s = kR; s <= kW; ++s) {
    const auto& older = state_.latches[s];
    if (older && (older->writes & f.reads)) return true;
  }
  return false;
}

void Machine::emit(Stage s, const InFlight& f, Stall stall) {
  TraceEvent e;
  e.cycle = state_.cycle;
  e.stage = s;
  e.pc = f.pc;
  e.opcode = f.ins.op;
  e.flags = static_cast<std::uint8_t>((state_.flag_s ? 1 : 0) | (state_.flag_k ? 2 : 0));
  e.mem_level = s == Stage::Memory ? f.mem_level : MemLevel::None;
  e.stall = stall;
  hash_event(state_.trace_hash, e);
  ++state_.events;
  if (sink_) sink_(e);
}

void Machine::raise(InFlight& f, const std::string& message) {
  f.fault = true;
  f.fault_message = message;
  f.flag_mask = 0;
  f.b_value.reset();
  f.g_value.reset();
  f.c_value.reset();
  f.c0_value.reset();
  f.a_value.reset();
  f.push_goal.reset();
  f.pop_goal = false;
  f.believe.reset();
  f.commit_add.clear();
  f.commit_del.clear();
  f.commit_check = false;
  f.commit_ok = false;
  f.send.reset();
}

void Machine::retire(InFlight& f) {
  auto& st = state_;
  f.writes = 0;
  ++st.counters.retired;
  ++st.counters.opcode_counts[static_cast<std::uint8_t>(f.ins.op)];
  if (f.fault) {
    st.halt = HaltReason::Fault;
    st.fault = "pc " + std::to_string(f.pc) + ": " + f.fault_message;
    return;
  }
  const Operand& d = f.ins.operands[0];
  if (f.b_value) st.b[d.value] = *f.b_value;
  if (f.g_value) st.g[d.value] = *f.g_value;
  if (f.c_value) st.c[d.value] = *f.c_value;
  if (f.a_value) st.a[d.value] = *f.a_value;
  if (f.c0_value) st.c[0] = *f.c0_value;
  if (f.flag_mask & 1) st.flag_s = f.flag_value & 1;
  if (f.flag_mask & 2) st.flag_k = f.flag_value & 2;
  if (f.ins.op == Opcode::Halt) st.halt = HaltReason::Halted;
  if (f.ins.op == Opcode::Yield) st.yielded = true;
}

void Machine::memory_stage(InFlight& f) {
  std::uint64_t total = 0;
  for (Term t : f.touched) {
    const MemAccess acc = state_.cache.access(t.index(), state_.store.shape_hash(t));
    total += acc.cycles;
    if (acc.level > f.mem_level) f.mem_level = acc.level;
  }
  f.touched.clear();
  f.touched.shrink_to_fit();
  f.remaining = std::max<std::uint64_t>(1, total);
}

void Machine::stage_actions() {
  auto& L = state_.latches;
  if (L[kW] && !L[kW]->started) {
    L[kW]->started = true;
    retire(*L[kW]);
  }
  for (std::size_t s = kW - 1; s >= kA; --s) {
    auto& f = L[s];
    if (!f) continue;
    if (!f->started) {
      f->started = true;
      f->remaining = 1;
      if (!f->fault) {
        if (s == static_cast<std::size_t>(Stage::Memory)) memory_stage(*f);
        if (s == static_cast<std::size_t>(Stage::State)) state_stage(*f);
        if (s == kA) act_stage(*f);
      }
    }
    if (f->remaining > 0) --f->remaining;
  }
  if (auto& f = L[kR]) {
    if (!f->started) {
      if (f->fault) {
        f->started = true;
        f->remaining = 1;
      } else if (reason_stage(*f)) {
        f->started = true;
        f->reason_cycles = f->remaining;
        const auto op = static_cast<std::uint8_t>(f->ins.op);
        auto& lo = state_.counters.min_reason[op];
        if (lo == 0 || f->reason_cycles < lo) lo = f->reason_cycles;
        state_.counters.max_reason[op] = std::max(state_.counters.max_reason[op], f->reason_cycles);
      }
      if (f->started && f->fault) {
        // A runtime fault stops the front end; nothing younger may issue.
        state_.fetch_enabled = false;
        state_.latches[kP].reset();
      }
    }
    if (f->started && f->remaining > 0) --f->remaining;
  }
}

void Machine::transitions() {
  auto& L = state_.latches;
  if (L[kW]) {
    emit(Stage::Writeback, *L[kW], Stall::None);
    L[kW].reset();
  }
  for (std::size_t s = kW - 1; s >= kR; --s) {
    auto& f = L[s];
    if (!f) continue;
    const bool done = f->started && f->remaining == 0;
    Stall stall = Stall::None;
    if (!done) {
      if (s == kR && !f->started) stall = Stall::Recv;
      if (s == kR && f->started && f->ins.op == Opcode::Neural) stall = Stall::Neural;
    } else if (L[s + 1]) {
      stall = Stall::Busy;
    }
    emit(static_cast<Stage>(s), *f, stall);
    if (done && !L[s + 1]) {
      f->started = false;
      f->remaining = 0;
      L[s + 1] = std::move(f);
      f.reset();
    }
  }
  if (auto& f = L[kP]) {
    const bool blocked = hazard(*f);
    const Stall stall = blocked ? Stall::Hazard : (L[kR] ? Stall::Busy : Stall::None);
    emit(Stage::Perceive, *f, stall);
    if (stall == Stall::None) {
      const Opcode op = f->ins.op;
      if ((op == Opcode::Brs && state_.flag_s) || (op == Opcode::Brk && state_.flag_k) || op == Opcode::Jmp) {
        state_.fetch_pc = f->ins.operands[0].value;
      }
      if (op == Opcode::Halt || op == Opcode::Illegal || f->fault) state_.fetch_enabled = false;
      L[kR] = std::move(f);
      f.reset();
    }
  }
}

void Machine::step() {
  if (halted()) return;
  ++state_.cycle;
  state_.yielded = false;
  if (!state_.latches[kP] && state_.fetch_enabled) fetch();
  stage_actions();
  transitions();
}

bool Machine::blocked_on_recv() const {
  const auto& r = state_.latches[kR];
  if (!r || r->started || r->fault || r->ins.op != Opcode::Recv || !state_.inbox.empty()) return false;
  for (std::size_t s = kA; s <= kW; ++s) {
    if (state_.latches[s]) return false;
  }
  return true;
}

bool Machine::neural_waiting() const {
  const auto& r = state_.latches[kR];
  return r && r->started && !r->fault && r->ins.op == Opcode::Neural && r->remaining > 0;
}

std::uint64_t Machine::neural_remaining() const { return neural_waiting() ? state_.latches[kR]->remaining : 0; }

bool Machine::at_safe_point() const {
  const auto& r = state_.latches[kR];
  if (!r) return true;
  if (r->started) return r->remaining == 0;
  return r->ins.op == Opcode::Recv;
}

RunOutcome Machine::run(std::uint64_t max_cycles) {
  while (!halted()) {
    if (blocked_on_recv()) return RunOutcome::Deadlock;
    if (state_.cycle >= max_cycles) return RunOutcome::BudgetExhausted;
    step();
  }
  return state_.halt == HaltReason::Halted ? RunOutcome::Halted : RunOutcome::Fault;
}

Checkpoint Machine::checkpoint() const { return Checkpoint{state_, fingerprint_, state_.beliefs.version()}; }

void Machine::restore(const Checkpoint& cp) {
  if (cp.program_fingerprint != fingerprint_) {
    throw CheckpointError("checkpoint was taken from a different program");
  }
  if (cp.belief_version != cp.state.beliefs.version()) {
    throw CheckpointError("checkpoint belief version does not match its belief base");
  }
  state_ = cp.state;
}

std::vector<Message> Machine::take_outbox() {
  std::vector<Message> out;
  out.swap(state_.outbox);
  return out;
}

ClauseId Machine::assert_clause(Term head, std::vector<Term> body) {
  auto kb = state_.kb ? std::make_shared<KnowledgeBase>(*state_.kb) : std::make_shared<KnowledgeBase>();
  const ClauseId id = kb->assert_clause(state_.store, head, std::move(body));
  state_.kb = std::move(kb);
  return id;
}

MetricsReport Machine::metrics(std::optional<RunOutcome> outcome) const {
  const auto& st = state_;
  MetricsReport r;
  if (outcome) {
    r.outcome = to_string(*outcome);
  } else {
    r.outcome = to_string(st.halt);
  }
  r.cycles = st.cycle;
  r.retired = st.counters.retired;
  r.inferences = st.counters.inferences;
  r.unifications = st.counters.unifications;
  r.cache = st.cache.stats();
  r.speculation = st.speculation;
  for (Opcode op : kAllOpcodes) {
    const auto n = st.counters.opcode_counts[static_cast<std::uint8_t>(op)];
    if (n > 0) r.opcode_counts[std::string(mnemonic(op))] = n;
  }
  r.finalize(cfg_.energy_per_cycle, cfg_.clock_hz);

  auto& s = r.scenario_metrics;
  auto occupancy = nlohmann::ordered_json::object();
  for (Opcode op : kAllOpcodes) {
    const auto i = static_cast<std::uint8_t>(op);
    if (st.counters.opcode_counts[i] == 0 && st.counters.min_reason[i] == 0) continue;
    occupancy[std::string(mnemonic(op))] = {{"min", st.counters.min_reason[i]}, {"max", st.counters.max_reason[i]}};
  }
  s["reason_occupancy"] = occupancy;
  s["plans"] = st.counters.plans;
  s["commits"] = st.counters.commits;
  s["commit_failures"] = st.counters.commit_failures;
  s["neural_calls"] = st.counters.neural_calls;
  s["neural_conformant"] = st.counters.neural_conformant;
  s["beliefs"] = st.beliefs.size();
  s["conflicts"] = st.beliefs.conflicts().size();
  s["trace_events"] = st.events;
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(st.trace_hash.value()));
  s["trace_hash"] = hex;
  if (!st.fault.empty()) s["fault"] = st.fault;
  return r;
}

}  // namespace ru
