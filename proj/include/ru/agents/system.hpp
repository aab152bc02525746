#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "ru/machine/machine.hpp"
#include "ru/util/config.hpp"

namespace ru {

struct SchedulerConfig {
  std::uint64_t quantum = 1000;
  std::uint64_t switch_penalty = 20;
  std::uint32_t agent_ceiling = 64;
  double urgency_weight = 2.0;
  double utility_weight = 1.0;
  double deadline_weight = 4.0;
  // Payload cells per wire cycle.
  std::uint64_t bandwidth_factor = 4;
  // When false, SENDs still execute but nothing is delivered.
  bool messaging = true;
  std::uint64_t seed = 0;

  // Keys: quantum, switch_penalty, agent_ceiling, urgency_weight,
  // utility_weight, deadline_weight, bandwidth_factor, messaging, seed.
  void apply(const KeyValueConfig& cfg);
};

struct PriorityParams {
  double urgency = 0.0;
  double utility = 0.0;
  std::optional<std::uint64_t> deadline;
};

enum class AgentStatus : std::uint8_t { Ready, Running, BlockedOnRecv, BlockedOnNeural, Halted };
const char* to_string(AgentStatus s);

struct AgentSpec {
  std::shared_ptr<const Program> program;
  MachineContext context;
  MachineConfig machine;
  PriorityParams priority;
};

class CapacityError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct AgentMetrics {
  std::uint32_t id = 0;
  AgentStatus status = AgentStatus::Ready;
  std::string halt;
  std::uint64_t local_cycles = 0;
  std::uint64_t on_core_cycles = 0;
  std::uint64_t off_core_cycles = 0;
  std::uint64_t dispatches = 0;
  std::uint64_t messages_sent = 0;
  std::uint64_t messages_received = 0;
  std::uint64_t plans = 0;
  // Global cycle at which the agent halted; 0 while it is still live.
  std::uint64_t completed_at = 0;
  std::uint64_t trace_hash = 0;
};

enum class SystemOutcome : std::uint8_t { Completed, BudgetExhausted, Deadlock };
const char* to_string(SystemOutcome o);

struct SystemMetrics {
  SystemOutcome outcome = SystemOutcome::Completed;
  std::uint64_t global_cycles = 0;
  std::uint64_t switches = 0;
  std::uint64_t switch_overhead = 0;
  std::uint64_t wire_cycles = 0;
  std::uint64_t idle_cycles = 0;
  std::uint64_t on_core_cycles = 0;
  // Sum over halted agents of the global cycle at which they halted.
  std::uint64_t total_decision_latency = 0;
  // Most PLAN executions by any single agent.
  std::uint64_t plan_convergence_depth = 0;
  std::uint64_t messages_delivered = 0;
  std::uint64_t messages_dropped = 0;
  std::vector<std::string> diagnostics;
  std::vector<AgentMetrics> agents;
};

nlohmann::ordered_json to_json(const SystemMetrics& m);

struct PendingMessage {
  Message message;
  std::uint64_t global_cycle = 0;
  std::uint64_t order = 0;
  // Payload lives in the host store rather than the sender's.
  bool from_host = false;
};

// Deterministic multi-agent runtime on one logical timeline. One agent runs
// at a time; messages move only at quantum boundaries.
class AgentSystem {
public:
  // `host` is the store the agents' contexts and injected messages refer to;
  // it must outlive the system.
  explicit AgentSystem(const TermStore& host, SchedulerConfig cfg = {});

  // Throws CapacityError past the agent ceiling.
  std::uint32_t spawn_agent(AgentSpec spec);

  // The ready agent with the highest score, or none. Equal scores go to the
  // agent dispatched least recently, then to the lower id.
  std::optional<std::uint32_t> schedule_next() const;
  double score(std::uint32_t id) const;

  SystemMetrics run_system(std::uint64_t max_global_cycles);

  // Queue a message whose payload lives in the host store.
  void send(const Message& m);
  // Delivers every pending message; returns how many arrived.
  std::size_t deliver_pending();

  std::size_t size() const { return agents_.size(); }
  Machine& machine(std::uint32_t id) { return *agents_.at(id).machine; }
  const Machine& machine(std::uint32_t id) const { return *agents_.at(id).machine; }
  AgentStatus status(std::uint32_t id) const { return agents_.at(id).status; }
  std::uint64_t now() const { return now_; }
  // Agent id of every dispatch, in order.
  const std::vector<std::uint32_t>& dispatch_log() const { return dispatch_log_; }
  const SchedulerConfig& config() const { return cfg_; }
  SystemMetrics metrics(SystemOutcome outcome) const;

private:
  struct Agent {
    std::uint32_t id = 0;
    std::unique_ptr<Machine> machine;
    PriorityParams priority;
    AgentStatus status = AgentStatus::Ready;
    std::uint64_t wake_at = 0;
    std::uint64_t pending_wire = 0;
    std::uint64_t on_core = 0;
    std::uint64_t off_core = 0;
    std::uint64_t dispatches = 0;
    // Dispatch sequence number of the last slice; 0 = never dispatched.
    std::uint64_t last_dispatch = 0;
    std::uint64_t sent = 0;
    std::uint64_t received = 0;
    std::uint64_t completed_at = 0;
  };

  void run_slice(Agent& a);
  void collect_outbox(Agent& a, std::uint64_t global_start, std::uint64_t local_start);
  void refresh_status();

  const TermStore& host_;
  SchedulerConfig cfg_;
  std::vector<Agent> agents_;
  std::vector<PendingMessage> pending_;
  std::uint64_t now_ = 0;
  std::uint64_t dispatch_seq_ = 0;
  std::optional<std::uint32_t> last_agent_;
  std::uint64_t switches_ = 0;
  std::uint64_t wire_ = 0;
  std::uint64_t idle_ = 0;
  std::uint64_t message_order_ = 0;
  std::uint64_t delivered_ = 0;
  std::uint64_t dropped_ = 0;
  std::vector<std::string> diagnostics_;
  std::vector<std::uint32_t> dispatch_log_;
};

}  // namespace ru
