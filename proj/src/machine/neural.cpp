#include "ru/machine/neural.hpp"

#include "ru/util/hash.hpp"

namespace ru {

NeuralResponse MockNeuralBackend::invoke(TermStore& store, Term prompt, Term schema) const {
  Fnv1a h;
  h.add(store.to_string(prompt));
  h.add(store.to_string(schema));
  h.add_u64(cfg_.seed);
  const std::uint64_t a = mix64(h.value());
  const std::uint64_t b = mix64(a ^ 0x5bd1e995ULL);
  const std::uint64_t c = mix64(b ^ 0x27d4eb2fULL);
  const double u = static_cast<double>(a >> 11) * 0x1.0p-53;
  const bool conformant = u < cfg_.conformance_prob;

  NeuralResponse r;
  r.response = store.compound(conformant ? "echo" : "garbled", {prompt});
  r.confidence = 0.5 + 0.5 * (static_cast<double>(c >> 11) * 0x1.0p-53);
  const std::uint64_t span = cfg_.latency_max >= cfg_.latency_min ? cfg_.latency_max - cfg_.latency_min : 0;
  r.latency = cfg_.latency_min + (span == 0 ? 0 : b % (span + 1));
  return r;
}

}  // namespace ru
