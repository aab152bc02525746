#pragma once

#include <cstdint>
#include <string>

#include "ru/term/term.hpp"

namespace ru {

struct NeuralResponse {
  bool ok = true;
  Term response;
  double confidence = 0.0;
  std::uint64_t latency = 0;
};

// Pluggable neural trap target. Implementations must be deterministic for a
// given (prompt, schema) so replay and checkpoints stay exact.
class NeuralBackend {
public:
  virtual ~NeuralBackend() = default;
  virtual NeuralResponse invoke(TermStore& store, Term prompt, Term schema) const = 0;
};

struct MockNeuralConfig {
  std::uint64_t latency_min = 5000;
  std::uint64_t latency_max = 5000;
  double conformance_prob = 1.0;
  std::uint64_t seed = 0;
};

// Answers echo(Prompt) when the draw says "conformant" and garbled(Prompt)
// otherwise. Every draw is a hash of the prompt text, schema text and seed,
// so the backend is a pure function of its inputs.
class MockNeuralBackend final : public NeuralBackend {
public:
  explicit MockNeuralBackend(MockNeuralConfig cfg = {}) : cfg_(cfg) {}
  NeuralResponse invoke(TermStore& store, Term prompt, Term schema) const override;
  const MockNeuralConfig& config() const { return cfg_; }

private:
  MockNeuralConfig cfg_;
};

}  // namespace ru
