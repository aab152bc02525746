#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ru::bench {

struct SuiteResult {
  std::string name;
  std::uint64_t cases = 0;
  std::uint64_t failures = 0;
  std::string first_failure;
  double seconds = 0.0;

  bool ok() const { return cases > 0 && failures == 0; }
  void fail(std::string what);
};

// Engine against the naive tree unifier: agreement on success and, when both
// succeed, variant-equal instances.
SuiteResult verify_unify(std::uint64_t seed = 1, std::uint32_t pairs = 10'000);
// Ground atoms provable by SLD resolution, the semi-naive fixpoint and the
// naive fixpoint must coincide on every generated Datalog KB.
SuiteResult verify_inference(std::uint64_t seed = 1, std::uint32_t kbs = 50);
// A* with hmax matches the BFS optimum (depth <= 8) and every plan validates.
SuiteResult verify_planner(std::uint64_t seed = 1, std::uint32_t instances = 100);
// Graph closure and the reach/3 built-in against plain BFS reachability.
SuiteResult verify_graph(std::uint64_t seed = 1, std::uint32_t nodes = 1000);
// encode/decode identity over every opcode with random operands.
SuiteResult verify_codec(std::uint64_t seed = 1, std::uint32_t per_opcode = 1000);
// assemble -> disassemble -> assemble is a fixpoint for every .rua file.
SuiteResult verify_asm(const std::string& samples_dir);
// Randomised believe sequences never leave a complement pair and the
// conflict log counts exactly the revised or rejected calls.
SuiteResult verify_beliefs(std::uint64_t seed = 1, std::uint32_t seeds = 100, std::uint32_t steps = 1000);

std::vector<SuiteResult> verify_all(const std::string& samples_dir, std::uint64_t seed = 1);

}  // namespace ru::bench
