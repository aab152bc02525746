// Opcode semantics for the Reason, Act and State stages.
#include <algorithm>
#include <cmath>

#include "ru/machine/machine.hpp"
#include "ru/planner/search.hpp"
#include "ru/term/unify.hpp"

namespace ru {
namespace {

constexpr std::uint8_t kFlagS = 1;
constexpr std::uint8_t kFlagK = 2;

void set_flags(InFlight& f, std::uint8_t mask, bool s, bool k = false) {
  f.flag_mask = mask;
  f.flag_value = static_cast<std::uint8_t>((s ? kFlagS : 0) | (k ? kFlagK : 0));
}

std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) { return (a + b - 1) / b; }

const KnowledgeBase& empty_kb() {
  static const KnowledgeBase kb;
  return kb;
}

void collect_constants(const TermStore& store, Term t, std::vector<Term>& out) {
  if (store.is_constant(t)) {
    out.push_back(t);
    return;
  }
  if (!store.is_compound(t)) return;
  for (Term a : store.args(t)) collect_constants(store, a, out);
}

std::size_t plan_length(const TermStore& store, Term plan) {
  return store.is_compound(plan) ? store.arity(plan) : 0;
}

}  // namespace

Term Machine::read_b(InFlight& f, std::uint32_t i) {
  const Term t = state_.b[i].term;
  if (!t.valid()) raise(f, "read of empty register B" + std::to_string(i));
  return t;
}

Term Machine::read_g(InFlight& f, std::uint32_t i) {
  const Term t = state_.g[i].term;
  if (!t.valid()) raise(f, "read of empty register G" + std::to_string(i));
  return t;
}

bool Machine::reason_stage(InFlight& f) {
  const auto& o = f.ins.operands;
  std::uint64_t occupancy = cfg_.plumbing_cycles;
  switch (f.ins.op) {
    case Opcode::Illegal:
      raise(f, "illegal instruction");
      break;
    case Opcode::Perceive: occupancy = exec_perceive(f); break;
    case Opcode::Infer: occupancy = exec_infer(f, false); break;
    case Opcode::Next: occupancy = exec_infer(f, true); break;
    case Opcode::Unify: occupancy = exec_unify(f); break;
    case Opcode::Plan: occupancy = exec_plan(f); break;
    case Opcode::Believe: occupancy = exec_believe(f); break;
    case Opcode::Commit: occupancy = exec_commit(f); break;
    case Opcode::LoadT: {
      const Term lit = state_.literals[o[1].value];
      if (o[0].cls == RegClass::B) {
        f.b_value = BeliefRegister{lit, Provenance::perceived(), 1.0};
      } else {
        f.g_value = GoalRegister{lit, 0};
      }
      break;
    }
    case Opcode::Mov: occupancy = exec_mov(f); break;
    case Opcode::GPush: {
      const Term g = read_g(f, o[0].value);
      if (!f.fault) f.push_goal = GoalEntry{g, static_cast<std::uint8_t>(o[1].value), 0};
      break;
    }
    case Opcode::GPop:
      f.pop_goal = true;
      break;
    case Opcode::Send: occupancy = exec_send(f); break;
    case Opcode::Recv: {
      if (state_.inbox.empty()) return false;
      Message m = state_.inbox.front();
      state_.inbox.pop_front();
      f.b_value = BeliefRegister{m.payload, Provenance::told(m.sender), 1.0};
      collect_cells(state_.store, m.payload, f.touched);
      set_flags(f, kFlagS, true);
      break;
    }
    case Opcode::Neural: occupancy = exec_neural(f); break;
    case Opcode::Brs:
    case Opcode::Brk:
    case Opcode::Jmp:
    case Opcode::Yield:
    case Opcode::Halt:
      break;
  }
  if (f.fault) {
    f.touched.clear();
    occupancy = cfg_.plumbing_cycles;
  }
  f.remaining = std::max<std::uint64_t>(1, occupancy);
  return true;
}

std::uint64_t Machine::exec_infer(InFlight& f, bool resume) {
  auto& st = state_;
  const auto& o = f.ins.operands;
  if (resume && !st.engine_live) {
    set_flags(f, kFlagS, false);
    return cfg_.plumbing_cycles;
  }
  if (!st.kb && !st.graph) {
    raise(f, "INFER without a knowledge base");
    return 0;
  }
  const KnowledgeBase& kb = st.kb ? *st.kb : empty_kb();
  if (!resume) {
    const Term goal = read_b(f, o[1].value);
    if (f.fault) return 0;
    if (!st.store.is_callable(goal)) {
      raise(f, "INFER goal is not an atom or compound term");
      return 0;
    }
    st.engine = SldEngine{};
    st.engine.start(goal, SolveLimits{cfg_.infer_max_steps, cfg_.infer_max_depth});
  }
  const std::uint64_t steps_before = st.engine.steps();
  const SolveStatus status = st.engine.next(st.store, kb, st.graph.get(), &f.touched);
  const std::uint64_t steps = st.engine.steps() - steps_before;
  st.counters.inferences += steps;
  st.counters.unifications += steps;
  const bool solved = status == SolveStatus::Solution;
  st.engine_live = solved;

  if (solved) {
    f.b_value = BeliefRegister{st.engine.answer(), Provenance::inferred(), 1.0};
    f.c0_value = st.engine.answer_bindings(st.store);
  } else {
    f.c0_value = Bindings{};
  }
  set_flags(f, kFlagS, solved);

  std::uint64_t cost = cfg_.infer_cycles_per_step * steps;
  if (resume) return cost;

  // Clause prediction for the query goal: 2-bit counters, one prediction per
  // INFER. A correct guess lets the lanes share the work; a wrong one pays
  // the rollback.
  const auto& alts = st.engine.root_alternatives();
  if (alts.empty()) return cost;
  ClauseId predicted = alts.front();
  for (ClauseId id : alts) {
    auto it = st.predictor.find(id);
    if ((it == st.predictor.end() ? 2 : it->second) >= 2) {
      predicted = id;
      break;
    }
  }
  auto counter = [&](ClauseId id) -> std::uint8_t& { return st.predictor.try_emplace(id, 2).first->second; };
  ++st.speculation.predictions;
  bool correct = false;
  if (solved && st.engine.root_choice()) {
    const std::size_t actual = *st.engine.root_choice();
    correct = alts[actual] == predicted;
    for (std::size_t i = 0; i < actual; ++i) {
      auto& c = counter(alts[i]);
      if (c > 0) --c;
    }
    auto& c = counter(alts[actual]);
    if (c < 3) ++c;
  } else {
    for (ClauseId id : alts) {
      auto& c = counter(id);
      if (c > 0) --c;
    }
  }
  if (correct) return ceil_div(cost, cfg_.lanes);
  ++st.speculation.mispredictions;
  ++st.speculation.rollbacks;
  return cost + cfg_.rollback_penalty;
}

std::uint64_t Machine::exec_unify(InFlight& f) {
  const auto& o = f.ins.operands;
  const Term x = read_b(f, o[1].value);
  const Term y = read_b(f, o[2].value);
  if (f.fault) return 0;
  Bindings b;
  UnifyStats stats;
  UnifyOptions options;
  options.touched = &f.touched;
  const bool ok = unify(state_.store, x, y, b, &stats, options) == UnifyStatus::Success;
  ++state_.counters.unifications;
  f.c_value = std::move(b);
  set_flags(f, kFlagS, ok);
  return std::max(cfg_.unify_floor, stats.comparisons);
}

std::uint64_t Machine::exec_plan(InFlight& f) {
  auto& st = state_;
  const auto& o = f.ins.operands;
  const Term goal = read_g(f, o[1].value);
  if (f.fault) return 0;
  if (!st.domain) {
    raise(f, "PLAN without a planning domain");
    return 0;
  }
  f.touched.push_back(goal);
  f.a_value = ActionRegister{};
  set_flags(f, kFlagS, false);
  if (cfg_.max_plans > 0 && st.counters.plans >= cfg_.max_plans) return cfg_.plan_floor;
  ++st.counters.plans;

  PlanningProblem problem;
  problem.init = st.beliefs.positive_ground(st.store);
  if (st.store.is_compound(goal) && st.store.symbol_name(st.store.symbol(goal)) == "and") {
    for (Term g : st.store.args(goal)) problem.goal.push_back(g);
  } else {
    problem.goal.push_back(goal);
  }
  for (Term g : problem.goal) f.touched.push_back(g);
  if (!st.objects.empty()) {
    problem.objects = st.objects;
  } else {
    std::vector<Term> consts;
    for (Term t : problem.init) {
      if (st.store.is_compound(t)) collect_constants(st.store, t, consts);
    }
    for (Term t : problem.goal) {
      if (st.store.is_compound(t)) collect_constants(st.store, t, consts);
    }
    std::sort(consts.begin(), consts.end());
    consts.erase(std::unique(consts.begin(), consts.end()), consts.end());
    problem.objects = std::move(consts);
  }

  PlanResult result;
  try {
    result = plan(st.store, *st.domain, problem, cfg_.plan_config());
  } catch (const PlanningError&) {
    return cfg_.plan_floor;
  }
  st.counters.plan_expansions += result.plan.expansions;
  const std::uint64_t cost =
      std::max(cfg_.plan_floor, ceil_div(cfg_.plan_cycles_per_expansion * result.plan.expansions, cfg_.lanes));
  if (result.status == PlanStatus::Solved) {
    const Term handle = result.plan.steps.empty() ? st.store.atom("plan")
                                                  : st.store.compound(st.store.intern("plan"), result.plan.steps);
    f.a_value = ActionRegister{handle, ActionStatus::Planned, 0};
    st.counters.plan_lengths.push_back(static_cast<std::uint32_t>(result.plan.steps.size()));
    set_flags(f, kFlagS, true);
  }
  return cost;
}

std::uint64_t Machine::exec_believe(InFlight& f) {
  const auto& o = f.ins.operands;
  const Term t = read_b(f, o[0].value);
  if (f.fault) return 0;
  if (state_.store.is_variable(t)) {
    raise(f, "BELIEVE of an unbound variable");
    return 0;
  }
  const BeliefRegister& reg = state_.b[o[0].value];
  const double conf =
      reg.provenance.kind == ProvenanceKind::Neural ? reg.confidence : static_cast<double>(o[1].value) / 255.0;
  f.believe = BeliefRegister{t, reg.provenance, conf};
  collect_cells(state_.store, t, f.touched);
  const std::uint64_t scanned = state_.beliefs.detect_contradiction(state_.store, t) ? 1 : 0;
  return cfg_.believe_base + scanned;
}

std::uint64_t Machine::exec_perceive(InFlight& f) {
  auto& st = state_;
  const auto& o = f.ins.operands;
  const Term filter = st.literals[o[2].value];
  std::uint64_t examined = 0;
  bool found = false;
  auto it = st.percepts.find(o[1].value);
  if (it != st.percepts.end()) {
    PerceptCursor& pc = it->second;
    while (pc.cursor < pc.items.size()) {
      const Term item = pc.items[pc.cursor++];
      ++examined;
      f.touched.push_back(item);
      Bindings scratch;
      if (unify(st.store, filter, item, scratch) == UnifyStatus::Success) {
        f.b_value = BeliefRegister{item, Provenance::perceived(), 1.0};
        found = true;
        break;
      }
    }
  }
  set_flags(f, kFlagS, found);
  return cfg_.perceive_base + examined;
}

std::uint64_t Machine::exec_commit(InFlight& f) {
  auto& st = state_;
  const std::uint32_t r = f.ins.operands[0].value;
  const ActionRegister& reg = st.a[r];
  if (reg.status != ActionStatus::Planned) {
    f.a_value = ActionRegister{};
    set_flags(f, kFlagS | kFlagK, false, false);
    return cfg_.commit_base;
  }
  const std::size_t n = plan_length(st.store, reg.plan);
  if (reg.cursor >= n) {
    f.a_value = ActionRegister{reg.plan, ActionStatus::Committed, reg.cursor};
    set_flags(f, kFlagS | kFlagK, false, false);
    return cfg_.commit_base;
  }
  if (!st.domain) {
    raise(f, "COMMIT without a planning domain");
    return 0;
  }
  const Term step = st.store.arg(reg.plan, reg.cursor);
  const OperatorSchema* op = st.domain->find(st.store, st.store.symbol(step), st.store.arity(step));
  Bindings b;
  if (!op || unify(st.store, op->head, step, b) != UnifyStatus::Success) {
    raise(f, "COMMIT of an action with no matching operator: " + st.store.to_string(step));
    return 0;
  }
  for (Term p : op->pre) f.commit_pre.push_back(apply_bindings(st.store, p, b));
  for (Term a : op->add) f.commit_add.push_back(apply_bindings(st.store, a, b));
  for (Term d : op->del) f.commit_del.push_back(apply_bindings(st.store, d, b));
  f.touched.push_back(step);
  for (Term p : f.commit_pre) f.touched.push_back(p);
  f.a_value = ActionRegister{reg.plan, ActionStatus::Planned, reg.cursor};
  f.commit_check = true;
  return cfg_.commit_base + f.commit_pre.size();
}

std::uint64_t Machine::exec_mov(InFlight& f) {
  const Operand& dst = f.ins.operands[0];
  const Operand& src = f.ins.operands[1];
  auto& st = state_;
  switch (src.cls) {
    case RegClass::B:
    case RegClass::G: {
      const Term t = src.cls == RegClass::B ? read_b(f, src.value) : read_g(f, src.value);
      if (f.fault) return 0;
      if (dst.cls == RegClass::B) {
        f.b_value = src.cls == RegClass::B ? st.b[src.value] : BeliefRegister{t, Provenance::perceived(), 1.0};
      } else {
        f.g_value = src.cls == RegClass::G ? st.g[src.value] : GoalRegister{t, 0};
      }
      break;
    }
    case RegClass::C: f.c_value = st.c[src.value]; break;
    case RegClass::A: f.a_value = st.a[src.value]; break;
  }
  return cfg_.plumbing_cycles;
}

std::uint64_t Machine::exec_send(InFlight& f) {
  auto& st = state_;
  const auto& o = f.ins.operands;
  const Operand& src = o[1];
  Term payload;
  if (src.cls == RegClass::B) {
    payload = read_b(f, src.value);
  } else if (src.cls == RegClass::G) {
    payload = read_g(f, src.value);
  } else {
    const ActionRegister& a = st.a[src.value];
    if (!a.plan.valid()) {
      raise(f, "read of empty register A" + std::to_string(src.value));
    } else if (a.status == ActionStatus::Planned && a.cursor < plan_length(st.store, a.plan)) {
      payload = st.store.arg(a.plan, a.cursor);
    } else {
      payload = a.plan;
    }
  }
  if (f.fault) return 0;
  const auto kind = static_cast<MessageKind>(o[2].value);
  collect_cells(st.store, payload, f.touched);
  if (kind == MessageKind::Action && !st.store.is_ground(payload)) {
    set_flags(f, kFlagS, false);
    return cfg_.plumbing_cycles;
  }
  f.send = Message{kind, payload, st.agent_id, o[0].value, 0};
  set_flags(f, kFlagS, true);
  return cfg_.plumbing_cycles;
}

std::uint64_t Machine::exec_neural(InFlight& f) {
  auto& st = state_;
  const auto& o = f.ins.operands;
  const Term prompt = read_b(f, o[1].value);
  const Term schema = read_b(f, o[2].value);
  if (f.fault) return 0;
  if (!neural_) {
    raise(f, "NEURAL without a backend");
    return 0;
  }
  const NeuralResponse resp = neural_->invoke(st.store, prompt, schema);
  f.touched.push_back(prompt);
  f.touched.push_back(schema);
  bool conforms = false;
  if (resp.ok && resp.response.valid()) {
    f.touched.push_back(resp.response);
    Bindings scratch;
    conforms = unify(st.store, resp.response, schema, scratch) == UnifyStatus::Success;
    ++st.counters.unifications;
    f.b_value = BeliefRegister{resp.response, Provenance::neural(), resp.confidence};
  } else {
    f.b_value = BeliefRegister{st.store.compound("error", {prompt}), Provenance::neural(), 0.0};
  }
  set_flags(f, kFlagS, conforms);
  const std::uint64_t occupancy = cfg_.neural_trap_overhead + resp.latency;
  ++st.counters.neural_calls;
  if (conforms) ++st.counters.neural_conformant;
  st.counters.neural_cycles += occupancy;
  st.counters.neural_confidence_micros += static_cast<std::uint64_t>(std::llround(resp.confidence * 1e6));
  return occupancy;
}

void Machine::act_stage(InFlight& f) {
  if (!f.commit_check) return;
  auto& st = state_;
  bool ok = true;
  for (Term p : f.commit_pre) {
    auto b = st.beliefs.find(st.store, p);
    if (!b) {
      ok = false;
      break;
    }
  }
  if (ok && cfg_.commit_fail_prob > 0.0 && st.rng.chance(cfg_.commit_fail_prob)) ok = false;
  f.commit_ok = ok;
  ++st.counters.commits;
  if (!ok) {
    ++st.counters.commit_failures;
    f.a_value->status = ActionStatus::Failed;
    set_flags(f, kFlagS | kFlagK, false, true);
    f.commit_add.clear();
    f.commit_del.clear();
    return;
  }
  const std::size_t n = plan_length(st.store, f.a_value->plan);
  ++f.a_value->cursor;
  f.a_value->status = f.a_value->cursor < n ? ActionStatus::Planned : ActionStatus::Committed;
  set_flags(f, kFlagS | kFlagK, true, false);
}

void Machine::state_stage(InFlight& f) {
  auto& st = state_;
  if (f.push_goal) {
    f.push_goal->seq = st.goal_seq++;
    st.goal_stack.push_back(*f.push_goal);
  }
  if (f.pop_goal) {
    if (st.goal_stack.empty()) {
      set_flags(f, kFlagS, false);
    } else {
      auto best = st.goal_stack.begin();
      for (auto it = st.goal_stack.begin(); it != st.goal_stack.end(); ++it) {
        if (it->priority > best->priority || (it->priority == best->priority && it->seq > best->seq)) best = it;
      }
      f.g_value = GoalRegister{best->goal, best->priority};
      st.goal_stack.erase(best);
      set_flags(f, kFlagS, true);
    }
  }
  if (f.believe) {
    try {
      const BelieveResult r =
          st.beliefs.believe(st.store, f.believe->term, f.believe->confidence, f.believe->provenance, st.cycle);
      set_flags(f, kFlagS | kFlagK, r.outcome != BeliefOutcome::Rejected, r.outcome != BeliefOutcome::Accepted);
    } catch (const BeliefError& e) {
      raise(f, e.what());
    }
  }
  if (f.commit_ok) {
    for (Term d : f.commit_del) {
      st.beliefs.believe(st.store, st.store.compound("not", {d}), 1.0, Provenance::inferred(), st.cycle);
    }
    for (Term a : f.commit_add) st.beliefs.believe(st.store, a, 1.0, Provenance::inferred(), st.cycle);
  }
  if (f.send) {
    f.send->send_cycle = st.cycle;
    st.outbox.push_back(*f.send);
  }
}

}  // namespace ru
