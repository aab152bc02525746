#include "ru/bench/verify.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <set>

#include "ru/belief/belief_base.hpp"
#include "ru/isa/assembler.hpp"
#include "ru/knowledge/backward.hpp"
#include "ru/knowledge/forward.hpp"
#include "ru/knowledge/loader.hpp"
#include "ru/oracle/generators.hpp"
#include "ru/oracle/naive.hpp"
#include "ru/planner/search.hpp"
#include "ru/planner/validate.hpp"
#include "ru/term/unify.hpp"
#include "ru/util/file.hpp"
#include "ru/util/hash.hpp"

namespace ru::bench {

void SuiteResult::fail(std::string what) {
  if (failures++ == 0) first_failure = std::move(what);
}

namespace {

class Timer {
public:
  explicit Timer(SuiteResult& r) : r_(r), t0_(std::chrono::steady_clock::now()) {}
  ~Timer() { r_.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count(); }

private:
  SuiteResult& r_;
  std::chrono::steady_clock::time_point t0_;
};

std::string text(const TermStore& store, Term t) { return oracle::to_tree(store, t).text(); }

}  // namespace

SuiteResult verify_unify(std::uint64_t seed, std::uint32_t pairs) {
  SuiteResult r;
  r.name = "unify";
  Timer timer(r);
  Rng rng(seed);
  for (std::uint32_t i = 0; i < pairs; ++i) {
    TermStore store;
    auto [x, y] = gen::random_term_pair(store, rng, 12);
    ++r.cases;
    Bindings b;
    const bool engine = unify(store, x, y, b) == UnifyStatus::Success;
    const oracle::Tree tx = oracle::to_tree(store, x);
    const oracle::Tree ty = oracle::to_tree(store, y);
    const auto mgu = oracle::unify(tx, ty);
    const std::string where = tx.text() + " = " + ty.text();
    if (engine != mgu.has_value()) {
      r.fail(where + ": engine " + (engine ? "unifies" : "fails") + ", oracle disagrees");
      continue;
    }
    if (!engine) continue;
    const oracle::Tree ix = oracle::to_tree(store, apply_bindings(store, x, b));
    const oracle::Tree iy = oracle::to_tree(store, apply_bindings(store, y, b));
    if (!(ix == iy)) {
      r.fail(where + ": engine instances differ: " + ix.text() + " vs " + iy.text());
      continue;
    }
    if (!oracle::is_variant(ix, oracle::apply(*mgu, tx))) {
      r.fail(where + ": engine instance " + ix.text() + " is not a variant of " + oracle::apply(*mgu, tx).text());
    }
  }
  return r;
}

SuiteResult verify_inference(std::uint64_t seed, std::uint32_t kbs) {
  SuiteResult r;
  r.name = "inference";
  Timer timer(r);
  Rng rng(seed);
  for (std::uint32_t k = 0; k < kbs; ++k) {
    const std::string src = gen::random_datalog(rng, 200);
    TermStore store;
    KnowledgeBase kb;
    load_kb(store, kb, src);
    ++r.cases;
    const std::string where = "kb " + std::to_string(k);

    std::set<std::string> forward;
    for (const Clause* c : kb.clauses()) {
      if (c->is_fact() && c->ground) forward.insert(text(store, c->head));
    }
    const ForwardResult fr = solve_forward(store, kb);
    if (fr.status != ForwardStatus::Fixpoint) {
      r.fail(where + ": forward step limit");
      continue;
    }
    for (Term t : fr.derived) forward.insert(text(store, t));

    // Ask about every atom of the Herbrand base rather than enumerating open
    // queries: without tabling the number of derivations of an open query
    // grows exponentially, while proof existence for a ground atom is cheap.
    std::vector<Term> constants;
    {
      std::set<Term> seen;
      for (const Clause* c : kb.clauses()) {
        std::vector<Term> cells;
        collect_cells(store, c->head, cells);
        for (Term g : c->body) collect_cells(store, g, cells);
        for (Term t : cells) {
          if (store.is_constant(t) && seen.insert(t).second) constants.push_back(t);
        }
      }
    }
    std::set<std::string> backward;
    bool limited = false;
    for (const PredicateKey& key : kb.predicates()) {
      std::vector<std::size_t> pick(key.arity, 0);
      while (true) {
        Term goal;
        if (key.arity == 0) {
          goal = store.atom(key.functor);
        } else {
          std::vector<Term> args;
          for (std::size_t i : pick) args.push_back(constants[i]);
          goal = store.compound(key.functor, args);
        }
        SolutionStream stream(store, kb, goal);
        if (stream.next()) {
          backward.insert(text(store, goal));
        } else if (stream.status() != SolveStatus::Exhausted) {
          limited = true;
        }
        std::size_t i = 0;
        while (i < pick.size() && ++pick[i] == constants.size()) pick[i++] = 0;
        if (i == pick.size()) break;
      }
    }
    if (limited) {
      r.fail(where + ": backward search hit a limit");
      continue;
    }

    const std::set<std::string> naive = oracle::naive_fixpoint(oracle::clauses_of(store, kb));
    if (backward != forward || forward != naive) {
      r.fail(where + ": backward " + std::to_string(backward.size()) + ", forward " + std::to_string(forward.size()) +
             ", naive " + std::to_string(naive.size()) + " ground atoms");
    }
  }
  return r;
}

SuiteResult verify_planner(std::uint64_t seed, std::uint32_t instances) {
  SuiteResult r;
  r.name = "planner";
  Timer timer(r);
  Rng rng(seed);
  std::uint32_t attempts = 0;
  while (r.cases < instances && attempts < instances * 20) {
    ++attempts;
    TermStore store;
    const PlanningDomain domain = gen::blocksworld_domain(store);
    const std::size_t blocks = 3 + rng.below(2);
    const PlanningProblem problem = gen::random_blocksworld(store, rng, blocks);
    const oracle::BfsPlanResult opt = oracle::bfs_plan(store, domain, problem, 8);
    if (!opt.solved) continue;
    ++r.cases;
    const std::string where = "instance " + std::to_string(attempts);
    const PlanResult got = plan(store, domain, problem);
    if (got.status != PlanStatus::Solved) {
      r.fail(where + ": planner " + to_string(got.status));
      continue;
    }
    if (got.plan.cost() != opt.plan.size()) {
      r.fail(where + ": length " + std::to_string(got.plan.cost()) + ", optimum " + std::to_string(opt.plan.size()));
      continue;
    }
    const ValidationResult v = validate_plan(store, domain, problem, got.plan.steps);
    if (!v.valid) r.fail(where + ": invalid plan: " + v.reason);
  }
  if (r.cases < instances) r.fail("only " + std::to_string(r.cases) + " solvable instances generated");
  return r;
}

SuiteResult verify_graph(std::uint64_t seed, std::uint32_t nodes) {
  SuiteResult r;
  r.name = "graph";
  Timer timer(r);
  Rng rng(seed);
  const oracle::LabeledEdges edges = gen::random_graph(rng, nodes, 3, 3);
  TermStore store;
  SemanticGraph g;
  std::vector<Term> node_terms;
  std::vector<Term> label_terms;
  for (std::uint32_t i = 0; i < edges.nodes; ++i) {
    node_terms.push_back(store.atom("n" + std::to_string(i)));
    g.add_node(node_terms.back());
  }
  for (std::uint32_t l = 0; l < edges.labels; ++l) label_terms.push_back(store.atom("l" + std::to_string(l)));
  for (const auto& [s, l, t] : edges.edges) g.add_edge(node_terms[s], label_terms[l], node_terms[t]);
  const KnowledgeBase empty;

  for (std::uint32_t src = 0; src < edges.nodes; src += std::max<std::uint32_t>(1, edges.nodes / 100)) {
    for (std::uint32_t l = 0; l < edges.labels; ++l) {
      ++r.cases;
      std::vector<std::uint32_t> want = oracle::reachable(edges, src, l);
      std::vector<std::uint32_t> closure;
      for (Term t : transitive_closure(g, label_terms[l], node_terms[src]).nodes) closure.push_back(g.node_id(t));
      std::sort(closure.begin(), closure.end());
      const std::string where = "n" + std::to_string(src) + " l" + std::to_string(l);
      if (closure != want) {
        r.fail(where + ": closure has " + std::to_string(closure.size()) + " nodes, expected " +
               std::to_string(want.size()));
        continue;
      }
      const Term goal = store.compound("reach", {node_terms[src], label_terms[l], store.variable("Y")});
      SolutionStream stream(store, empty, goal, {}, &g);
      std::vector<std::uint32_t> via_engine;
      for (Term t : stream.all()) via_engine.push_back(g.node_id(store.arg(t, 2)));
      std::sort(via_engine.begin(), via_engine.end());
      via_engine.erase(std::unique(via_engine.begin(), via_engine.end()), via_engine.end());
      if (via_engine != want) r.fail(where + ": reach/3 answers differ");
    }
  }
  return r;
}

SuiteResult verify_codec(std::uint64_t seed, std::uint32_t per_opcode) {
  SuiteResult r;
  r.name = "codec";
  Timer timer(r);
  Rng rng(seed);
  for (Opcode op : kAllOpcodes) {
    const Signature& sig = signature(op);
    std::uint32_t done = 0;
    std::uint32_t tries = 0;
    while (done < per_opcode && tries < per_opcode * 50) {
      ++tries;
      Instruction ins;
      ins.op = op;
      for (std::size_t i = 0; i < sig.arity; ++i) {
        const SlotSpec& sp = sig.slots[i];
        Operand& o = ins.operands[i];
        o.kind = sp.kind;
        switch (sp.kind) {
          case OperandKind::Reg: {
            std::vector<RegClass> allowed;
            for (unsigned c = 0; c < 4; ++c) {
              if (sp.classes & (1U << c)) allowed.push_back(static_cast<RegClass>(c));
            }
            o.cls = allowed[rng.below(allowed.size())];
            o.value = static_cast<std::uint32_t>(rng.below(register_count(o.cls)));
            break;
          }
          case OperandKind::Imm8:
            o.value = static_cast<std::uint32_t>(rng.below(256));
            break;
          case OperandKind::Kind:
            o.value = static_cast<std::uint32_t>(rng.below(4));
            break;
          default:
            o.value = static_cast<std::uint32_t>(rng.next_u64());
            break;
        }
      }
      if (!check_operands(ins).empty()) continue;
      ++done;
      ++r.cases;
      const std::uint64_t word = encode(ins);
      if (!(decode(word) == ins)) {
        r.fail(format_instruction(ins) + ": decode(encode(x)) differs");
      } else if (encode(decode(word)) != word) {
        r.fail(format_instruction(ins) + ": encode(decode(w)) differs");
      }
    }
    if (done < per_opcode) r.fail(std::string(mnemonic(op)) + ": could not generate enough valid operand sets");
  }
  return r;
}

SuiteResult verify_asm(const std::string& samples_dir) {
  SuiteResult r;
  r.name = "asm";
  Timer timer(r);
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(samples_dir, ec)) {
    r.fail("no sample directory " + samples_dir);
    return r;
  }
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(samples_dir)) {
    if (e.is_regular_file() && e.path().extension() == ".rua") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  for (const fs::path& p : files) {
    ++r.cases;
    try {
      const Program a = assemble(read_text_file(p.string()));
      const std::string listing = disassemble(a);
      const Program b = assemble(listing);
      if (!(a == b)) {
        r.fail(p.filename().string() + ": reassembled program differs");
      } else if (disassemble(b) != listing) {
        r.fail(p.filename().string() + ": listing is not a fixpoint");
      } else if (!(read_rub(write_rub(a)) == a)) {
        r.fail(p.filename().string() + ": binary round trip differs");
      }
    } catch (const std::exception& e) {
      r.fail(p.filename().string() + ": " + e.what());
    }
  }
  return r;
}

SuiteResult verify_beliefs(std::uint64_t seed, std::uint32_t seeds, std::uint32_t steps) {
  SuiteResult r;
  r.name = "beliefs";
  Timer timer(r);
  static constexpr const char* kPreds[] = {"p", "q", "r"};
  static constexpr const char* kConsts[] = {"a", "b", "c", "d"};
  for (std::uint32_t s = 0; s < seeds; ++s) {
    Rng rng(hash_combine(seed, s));
    TermStore store;
    BeliefBase base;
    std::uint64_t revised_or_rejected = 0;
    ++r.cases;
    for (std::uint32_t i = 0; i < steps; ++i) {
      const char* pred = kPreds[rng.below(3)];
      const std::uint64_t arity = 1 + rng.below(2);
      std::vector<Term> args;
      for (std::uint64_t k = 0; k < arity; ++k) args.push_back(store.atom(kConsts[rng.below(4)]));
      Term lit = store.compound(store.intern(pred), args);
      if (rng.below(2) == 0) lit = store.compound("not", {lit});
      const double conf = static_cast<double>(rng.below(11)) / 10.0;
      const BelieveResult res = base.believe(store, lit, conf, Provenance::perceived(), i);
      if (res.outcome != BeliefOutcome::Accepted) ++revised_or_rejected;
    }
    const std::string where = "seed " + std::to_string(s);
    for (const Belief& b : base.beliefs()) {
      const Term c = normalize_negation(store, b.content);
      const bool neg = store.is_compound(c) && store.arity(c) == 1 && store.symbol_name(store.symbol(c)) == "not";
      const Term complement = neg ? store.arg(c, 0) : store.compound("not", {c});
      if (base.find(store, complement)) {
        r.fail(where + ": complement pair " + store.to_string(c));
        break;
      }
    }
    if (base.conflicts().size() != revised_or_rejected) {
      r.fail(where + ": " + std::to_string(base.conflicts().size()) + " conflicts logged, " +
             std::to_string(revised_or_rejected) + " revised or rejected");
    }
  }
  return r;
}

std::vector<SuiteResult> verify_all(const std::string& samples_dir, std::uint64_t seed) {
  return {verify_unify(seed),   verify_inference(seed),       verify_planner(seed), verify_graph(seed),
          verify_codec(seed),   verify_asm(samples_dir),      verify_beliefs(seed)};
}

}  // namespace ru::bench
