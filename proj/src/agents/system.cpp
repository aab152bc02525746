#include "ru/agents/system.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>

#include "ru/term/unify.hpp"

namespace ru {

void SchedulerConfig::apply(const KeyValueConfig& cfg) {
  cfg.read("quantum", quantum);
  cfg.read("switch_penalty", switch_penalty);
  cfg.read("agent_ceiling", agent_ceiling);
  cfg.read("urgency_weight", urgency_weight);
  cfg.read("utility_weight", utility_weight);
  cfg.read("deadline_weight", deadline_weight);
  cfg.read("bandwidth_factor", bandwidth_factor);
  cfg.read("messaging", messaging);
  cfg.read("seed", seed);
  if (quantum == 0) throw ConfigError("quantum must be positive");
  if (bandwidth_factor == 0) throw ConfigError("bandwidth_factor must be positive");
}

const char* to_string(AgentStatus s) {
  switch (s) {
    case AgentStatus::Ready: return "ready";
    case AgentStatus::Running: return "running";
    case AgentStatus::BlockedOnRecv: return "blocked_on_recv";
    case AgentStatus::BlockedOnNeural: return "blocked_on_neural";
    case AgentStatus::Halted: return "halted";
  }
  return "?";
}

const char* to_string(SystemOutcome o) {
  switch (o) {
    case SystemOutcome::Completed: return "completed";
    case SystemOutcome::BudgetExhausted: return "budget_exhausted";
    case SystemOutcome::Deadlock: return "deadlock";
  }
  return "?";
}

AgentSystem::AgentSystem(const TermStore& host, SchedulerConfig cfg) : host_(host), cfg_(cfg) {}

std::uint32_t AgentSystem::spawn_agent(AgentSpec spec) {
  std::size_t live = 0;
  for (const Agent& a : agents_) live += a.status != AgentStatus::Halted;
  if (live >= cfg_.agent_ceiling) {
    throw CapacityError("agent ceiling of " + std::to_string(cfg_.agent_ceiling) + " reached");
  }
  Agent a;
  a.id = static_cast<std::uint32_t>(agents_.size());
  a.machine = std::make_unique<Machine>(host_, std::move(spec.program), std::move(spec.context), spec.machine);
  a.machine->state().agent_id = a.id;
  a.priority = spec.priority;
  agents_.push_back(std::move(a));
  return agents_.back().id;
}

double AgentSystem::score(std::uint32_t id) const {
  const Agent& a = agents_.at(id);
  double s = cfg_.urgency_weight * a.priority.urgency + cfg_.utility_weight * a.priority.utility;
  if (a.priority.deadline) {
    if (*a.priority.deadline <= now_) return std::numeric_limits<double>::infinity();
    s += cfg_.deadline_weight * static_cast<double>(cfg_.quantum) / static_cast<double>(*a.priority.deadline - now_);
  }
  return s;
}

std::optional<std::uint32_t> AgentSystem::schedule_next() const {
  std::optional<std::uint32_t> best;
  double best_score = 0.0;
  for (const Agent& a : agents_) {
    if (a.status != AgentStatus::Ready) continue;
    const double s = score(a.id);
    if (!best || s > best_score ||
        (s == best_score && a.last_dispatch < agents_[*best].last_dispatch)) {
      best = a.id;
      best_score = s;
    }
  }
  return best;
}

void AgentSystem::send(const Message& m) {
  pending_.push_back(PendingMessage{m, now_, message_order_++, true});
}

std::size_t AgentSystem::deliver_pending() {
  std::stable_sort(pending_.begin(), pending_.end(), [](const PendingMessage& x, const PendingMessage& y) {
    if (x.global_cycle != y.global_cycle) return x.global_cycle < y.global_cycle;
    if (x.message.sender != y.message.sender) return x.message.sender < y.message.sender;
    return x.order < y.order;
  });
  std::size_t delivered = 0;
  for (const PendingMessage& p : pending_) {
    const Message& m = p.message;
    if (m.receiver >= agents_.size() || agents_[m.receiver].status == AgentStatus::Halted) {
      ++dropped_;
      diagnostics_.push_back("dropped " + std::string(to_string(m.kind)) + " message from agent " +
                             std::to_string(m.sender) + " to " +
                             (m.receiver >= agents_.size() ? "unknown" : "halted") + " agent " +
                             std::to_string(m.receiver));
      continue;
    }
    Agent& to = agents_[m.receiver];
    const TermStore& from = p.from_host ? host_ : agents_.at(m.sender).machine->state().store;
    TermStore& dst = to.machine->state().store;
    Message copy = m;
    copy.payload = import_term(from, m.payload, dst);
    to.machine->deliver(copy);
    to.pending_wire += (dst.cells(copy.payload) + cfg_.bandwidth_factor - 1) / cfg_.bandwidth_factor;
    ++to.received;
    ++delivered;
  }
  pending_.clear();
  delivered_ += delivered;
  return delivered;
}

void AgentSystem::collect_outbox(Agent& a, std::uint64_t global_start, std::uint64_t local_start) {
  for (const Message& m : a.machine->take_outbox()) {
    ++a.sent;
    if (!cfg_.messaging) {
      ++dropped_;
      continue;
    }
    pending_.push_back(PendingMessage{m, global_start + (m.send_cycle - local_start), message_order_++, false});
  }
}

void AgentSystem::refresh_status() {
  for (Agent& a : agents_) {
    if (a.status == AgentStatus::BlockedOnRecv && !a.machine->state().inbox.empty()) a.status = AgentStatus::Ready;
    if (a.status == AgentStatus::BlockedOnNeural && a.wake_at <= now_) a.status = AgentStatus::Ready;
  }
}

void AgentSystem::run_slice(Agent& a) {
  Machine& m = *a.machine;
  const std::uint64_t global_start = now_;
  const std::uint64_t local_start = m.state().cycle;
  dispatch_log_.push_back(a.id);
  a.status = AgentStatus::Running;
  std::uint64_t used = 0;
  while (true) {
    if (m.halted()) {
      a.status = AgentStatus::Halted;
      a.completed_at = now_;
      break;
    }
    if (m.blocked_on_recv()) {
      a.status = AgentStatus::BlockedOnRecv;
      break;
    }
    if (used >= cfg_.quantum && m.at_safe_point()) {
      a.status = AgentStatus::Ready;
      break;
    }
    m.step();
    ++used;
    ++now_;
    if (m.state().yielded) {
      a.status = m.halted() ? AgentStatus::Halted : AgentStatus::Ready;
      if (m.halted()) a.completed_at = now_;
      break;
    }
    if (m.neural_waiting()) {
      // The trap runs off-core: the agent's own clock keeps counting while
      // the core is free for someone else.
      std::uint64_t off = 0;
      while (m.neural_waiting()) {
        m.step();
        ++off;
      }
      a.off_core += off;
      a.wake_at = now_ + off;
      a.status = AgentStatus::BlockedOnNeural;
      break;
    }
  }
  a.on_core += used;
  collect_outbox(a, global_start, local_start);
}

SystemMetrics AgentSystem::run_system(std::uint64_t max_global_cycles) {
  while (true) {
    const bool all_halted = std::all_of(agents_.begin(), agents_.end(),
                                        [](const Agent& a) { return a.status == AgentStatus::Halted; });
    if (all_halted) {
      if (!pending_.empty()) deliver_pending();
      return metrics(SystemOutcome::Completed);
    }
    if (now_ >= max_global_cycles) return metrics(SystemOutcome::BudgetExhausted);
    deliver_pending();
    refresh_status();
    const auto pick = schedule_next();
    if (!pick) {
      std::optional<std::uint64_t> wake;
      for (const Agent& a : agents_) {
        if (a.status == AgentStatus::BlockedOnNeural) wake = std::min(wake.value_or(a.wake_at), a.wake_at);
      }
      if (!wake) return metrics(SystemOutcome::Deadlock);
      idle_ += *wake - now_;
      now_ = *wake;
      continue;
    }
    Agent& a = agents_[*pick];
    if (last_agent_ != a.id) {
      ++switches_;
      now_ += cfg_.switch_penalty;
      last_agent_ = a.id;
    }
    now_ += a.pending_wire;
    wire_ += a.pending_wire;
    a.pending_wire = 0;
    ++a.dispatches;
    a.last_dispatch = ++dispatch_seq_;
    run_slice(a);
  }
}

SystemMetrics AgentSystem::metrics(SystemOutcome outcome) const {
  SystemMetrics m;
  m.outcome = outcome;
  m.global_cycles = now_;
  m.switches = switches_;
  m.switch_overhead = switches_ * cfg_.switch_penalty;
  m.wire_cycles = wire_;
  m.idle_cycles = idle_;
  m.messages_delivered = delivered_;
  m.messages_dropped = dropped_;
  m.diagnostics = diagnostics_;
  for (const Agent& a : agents_) {
    const MachineState& st = a.machine->state();
    AgentMetrics am;
    am.id = a.id;
    am.status = a.status;
    am.halt = st.halt == HaltReason::Running ? "running" : to_string(st.halt);
    am.local_cycles = st.cycle;
    am.on_core_cycles = a.on_core;
    am.off_core_cycles = a.off_core;
    am.dispatches = a.dispatches;
    am.messages_sent = a.sent;
    am.messages_received = a.received;
    am.plans = st.counters.plans;
    am.completed_at = a.completed_at;
    am.trace_hash = a.machine->trace_hash();
    m.on_core_cycles += a.on_core;
    if (a.status == AgentStatus::Halted) m.total_decision_latency += a.completed_at;
    m.plan_convergence_depth = std::max(m.plan_convergence_depth, am.plans);
    m.agents.push_back(am);
  }
  return m;
}

nlohmann::ordered_json to_json(const SystemMetrics& m) {
  nlohmann::ordered_json j;
  j["outcome"] = to_string(m.outcome);
  j["global_cycles"] = m.global_cycles;
  j["switches"] = m.switches;
  j["switch_overhead"] = m.switch_overhead;
  j["wire_cycles"] = m.wire_cycles;
  j["idle_cycles"] = m.idle_cycles;
  j["on_core_cycles"] = m.on_core_cycles;
  j["total_decision_latency"] = m.total_decision_latency;
  j["plan_convergence_depth"] = m.plan_convergence_depth;
  j["messages_delivered"] = m.messages_delivered;
  j["messages_dropped"] = m.messages_dropped;
  j["diagnostics"] = m.diagnostics;
  auto agents = nlohmann::ordered_json::array();
  for (const AgentMetrics& a : m.agents) {
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(a.trace_hash));
    agents.push_back({{"id", a.id},
                      {"status", to_string(a.status)},
                      {"halt", a.halt},
                      {"local_cycles", a.local_cycles},
                      {"on_core_cycles", a.on_core_cycles},
                      {"off_core_cycles", a.off_core_cycles},
                      {"dispatches", a.dispatches},
                      {"messages_sent", a.messages_sent},
                      {"messages_received", a.messages_received},
                      {"plans", a.plans},
                      {"completed_at", a.completed_at},
                      {"trace_hash", hex}});
  }
  j["agents"] = agents;
  return j;
}

}  // namespace ru
