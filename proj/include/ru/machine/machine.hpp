#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ru/belief/belief_base.hpp"
#include "ru/isa/isa.hpp"
#include "ru/knowledge/backward.hpp"
#include "ru/knowledge/knowledge_base.hpp"
#include "ru/knowledge/semantic_graph.hpp"
#include "ru/machine/cache.hpp"
#include "ru/machine/config.hpp"
#include "ru/machine/metrics.hpp"
#include "ru/machine/neural.hpp"
#include "ru/machine/trace.hpp"
#include "ru/planner/domain.hpp"
#include "ru/term/bindings.hpp"
#include "ru/term/term.hpp"
#include "ru/util/hash.hpp"
#include "ru/util/rng.hpp"

namespace ru {

// Everything a machine reads from its host. Term handles refer to the host
// store; the machine copies that store at construction, so they stay valid
// inside the machine.
struct MachineContext {
  std::shared_ptr<const KnowledgeBase> kb;
  std::shared_ptr<const PlanningDomain> domain;
  // Planner object universe; empty means "constants of state and goal".
  std::vector<Term> objects;
  // Believed as perceived facts, confidence 1, before the first cycle.
  std::vector<Term> initial_beliefs;
  std::shared_ptr<const SemanticGraph> graph;
  // Percept streams by PERCEIVE stream id.
  std::map<std::uint32_t, std::vector<Term>> percepts;
  std::shared_ptr<const NeuralBackend> neural;
};

enum class ActionStatus : std::uint8_t { Empty, Planned, Committed, Failed };
const char* to_string(ActionStatus s);

struct BeliefRegister {
  Term term;
  Provenance provenance;
  double confidence = 1.0;
  friend bool operator==(const BeliefRegister&, const BeliefRegister&) = default;
};

struct GoalRegister {
  Term term;
  std::uint8_t priority = 0;
  friend bool operator==(const GoalRegister&, const GoalRegister&) = default;
};

// `plan` is plan(Step1, ..., StepN), or the atom `plan` for an empty plan.
struct ActionRegister {
  Term plan;
  ActionStatus status = ActionStatus::Empty;
  std::uint32_t cursor = 0;
  friend bool operator==(const ActionRegister&, const ActionRegister&) = default;
};

struct GoalEntry {
  Term goal;
  std::uint8_t priority = 0;
  std::uint64_t seq = 0;
  friend bool operator==(const GoalEntry&, const GoalEntry&) = default;
};

struct Message {
  MessageKind kind = MessageKind::Belief;
  Term payload;
  std::uint32_t sender = 0;
  std::uint32_t receiver = 0;
  // Sender's local cycle at the State stage of SEND.
  std::uint64_t send_cycle = 0;
  friend bool operator==(const Message&, const Message&) = default;
};

enum class HaltReason : std::uint8_t { Running, Halted, Fault };
const char* to_string(HaltReason r);

enum class RunOutcome : std::uint8_t { Halted, Fault, BudgetExhausted, Deadlock };
const char* to_string(RunOutcome o);

// One instruction in flight, with everything the later stages need.
struct InFlight {
  std::uint64_t seq = 0;
  std::uint32_t pc = 0;
  Instruction ins;
  std::uint64_t reads = 0;
  std::uint64_t writes = 0;
  std::uint64_t remaining = 0;
  bool started = false;
  std::uint64_t reason_cycles = 0;

  bool fault = false;
  std::string fault_message;

  // Flag results, applied at Writeback when the mask bit is set.
  std::uint8_t flag_mask = 0;
  std::uint8_t flag_value = 0;

  // Register results.
  std::optional<BeliefRegister> b_value;
  std::optional<GoalRegister> g_value;
  std::optional<Bindings> c_value;
  std::optional<ActionRegister> a_value;
  std::uint8_t dest = 0;
  // INFER and NEXT also write C0.
  std::optional<Bindings> c0_value;

  std::vector<Term> touched;
  MemLevel mem_level = MemLevel::None;

  // State-stage effects.
  std::optional<GoalEntry> push_goal;
  bool pop_goal = false;
  std::optional<BeliefRegister> believe;
  std::uint8_t believe_imm = 0;
  std::vector<Term> commit_pre;
  std::vector<Term> commit_add;
  std::vector<Term> commit_del;
  bool commit_check = false;
  bool commit_ok = false;
  std::optional<Message> send;
};

struct MachineCounters {
  std::uint64_t retired = 0;
  std::uint64_t inferences = 0;
  std::uint64_t unifications = 0;
  std::uint64_t plans = 0;
  std::uint64_t plan_expansions = 0;
  // Length of every plan found, in order.
  std::vector<std::uint32_t> plan_lengths;
  std::uint64_t neural_calls = 0;
  std::uint64_t neural_conformant = 0;
  std::uint64_t neural_cycles = 0;
  std::uint64_t neural_confidence_micros = 0;
  std::uint64_t commits = 0;
  std::uint64_t commit_failures = 0;
  std::array<std::uint64_t, 256> opcode_counts{};
  // Smallest Reason-stage occupancy seen per opcode; 0 = never executed.
  std::array<std::uint64_t, 256> min_reason{};
  std::array<std::uint64_t, 256> max_reason{};
  friend bool operator==(const MachineCounters&, const MachineCounters&) = default;
};

struct PerceptCursor {
  std::vector<Term> items;
  std::size_t cursor = 0;
  friend bool operator==(const PerceptCursor&, const PerceptCursor&) = default;
};

// The complete architectural and microarchitectural state. Copying it is a
// checkpoint.
struct MachineState {
  TermStore store;
  std::vector<Term> literals;

  std::array<BeliefRegister, 16> b{};
  std::array<GoalRegister, 8> g{};
  std::array<Bindings, 4> c{};
  std::array<ActionRegister, 8> a{};
  bool flag_s = false;
  bool flag_k = false;

  std::uint32_t fetch_pc = 0;
  bool fetch_enabled = true;
  std::array<std::optional<InFlight>, kStageCount> latches{};
  std::uint64_t next_seq = 0;

  std::vector<GoalEntry> goal_stack;
  std::uint64_t goal_seq = 0;
  BeliefBase beliefs;
  std::shared_ptr<const KnowledgeBase> kb;
  std::shared_ptr<const PlanningDomain> domain;
  std::shared_ptr<const SemanticGraph> graph;
  std::vector<Term> objects;
  std::map<std::uint32_t, PerceptCursor> percepts;

  SldEngine engine;
  bool engine_live = false;
  std::map<ClauseId, std::uint8_t> predictor;
  SpeculationStats speculation;
  CacheModel cache;
  Rng rng;

  std::deque<Message> inbox;
  std::vector<Message> outbox;
  std::uint32_t agent_id = 0;

  std::uint64_t cycle = 0;
  MachineCounters counters;
  HaltReason halt = HaltReason::Running;
  std::string fault;
  bool yielded = false;
  Fnv1a trace_hash;
  std::uint64_t events = 0;

  double energy_joules(const MachineConfig& cfg) const { return static_cast<double>(cycle) * cfg.energy_per_cycle; }
};

class CheckpointError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Checkpoint {
  MachineState state;
  std::uint64_t program_fingerprint = 0;
  std::uint64_t belief_version = 0;
};

// Register ids for hazard tracking: B0-15, G0-7, C0-3, A0-7, then the flag
// register, the belief base and the goal stack.
inline constexpr int kHazardFlags = 36;
inline constexpr int kHazardBeliefs = 37;
inline constexpr int kHazardGoals = 38;
int hazard_id(RegClass c, std::uint32_t index);
// Read and write sets of one instruction, as bit masks over hazard ids.
std::pair<std::uint64_t, std::uint64_t> hazard_sets(const Instruction& ins);

class Machine {
public:
  // Throws ProgramError for an invalid program and ParseError for a literal
  // that does not parse.
  Machine(const TermStore& host, std::shared_ptr<const Program> program, MachineContext ctx,
          MachineConfig cfg = {});

  // Advances every stage by one cycle. No-op once halted.
  void step();
  // Steps until halt, fault, deadlock or until the cycle counter reaches
  // max_cycles.
  RunOutcome run(std::uint64_t max_cycles);

  bool halted() const { return state_.halt != HaltReason::Running; }
  // RECV is waiting at Reason with an empty inbox and nothing older is left.
  bool blocked_on_recv() const;
  // A NEURAL trap is outstanding in Reason.
  bool neural_waiting() const;
  std::uint64_t neural_remaining() const;
  // Reason holds nothing, a finished instruction, or a blocked RECV.
  bool at_safe_point() const;

  Checkpoint checkpoint() const;
  // Throws CheckpointError when the checkpoint came from another program.
  void restore(const Checkpoint& cp);

  void deliver(const Message& m) { state_.inbox.push_back(m); }
  std::vector<Message> take_outbox();

  // Host-side KB mutation; the first call copies the shared KB.
  ClauseId assert_clause(Term head, std::vector<Term> body = {});

  void set_trace_sink(std::function<void(const TraceEvent&)> sink) { sink_ = std::move(sink); }

  MachineState& state() { return state_; }
  const MachineState& state() const { return state_; }
  const Program& program() const { return *program_; }
  const MachineConfig& config() const { return cfg_; }
  const SpeculationStats& speculation_stats() const { return state_.speculation; }
  std::uint64_t trace_hash() const { return state_.trace_hash.value(); }

  MetricsReport metrics(std::optional<RunOutcome> outcome = std::nullopt) const;

private:
  void fetch();
  bool hazard(const InFlight& f) const;
  void emit(Stage s, const InFlight& f, Stall stall);
  void stage_actions();
  void transitions();

  void retire(InFlight& f);
  void memory_stage(InFlight& f);
  void state_stage(InFlight& f);
  void act_stage(InFlight& f);
  // Returns false when the instruction cannot start yet (RECV on an empty
  // inbox).
  bool reason_stage(InFlight& f);
  void raise(InFlight& f, const std::string& message);

  std::uint64_t exec_infer(InFlight& f, bool resume);
  std::uint64_t exec_unify(InFlight& f);
  std::uint64_t exec_plan(InFlight& f);
  std::uint64_t exec_believe(InFlight& f);
  std::uint64_t exec_perceive(InFlight& f);
  std::uint64_t exec_commit(InFlight& f);
  std::uint64_t exec_mov(InFlight& f);
  std::uint64_t exec_send(InFlight& f);
  std::uint64_t exec_neural(InFlight& f);

  Term read_b(InFlight& f, std::uint32_t i);
  Term read_g(InFlight& f, std::uint32_t i);

  std::shared_ptr<const Program> program_;
  std::uint64_t fingerprint_;
  MachineConfig cfg_;
  MachineState state_;
  std::shared_ptr<const NeuralBackend> neural_;
  std::function<void(const TraceEvent&)> sink_;
};

}  // namespace ru
