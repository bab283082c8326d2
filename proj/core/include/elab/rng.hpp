#ifndef ELAB_RNG_HPP
#define ELAB_RNG_HPP

#include <cstdint>
#include <random>
#include <vector>

namespace elab {

// Keyed hash used for seed derivation and per-state quantum outcomes. The
// whole simulator depends on this being stable across platforms, so only
// fixed-width integer arithmetic is used (std::hash and the std::
// distributions are implementation-defined and must not appear anywhere in
// simulation behavior).
std::uint64_t splitmix64(std::uint64_t x);

// Combine values into one 64-bit key, order-sensitive.
std::uint64_t mix_key(std::uint64_t a, std::uint64_t b);
std::uint64_t mix_key(std::uint64_t a, std::uint64_t b, std::uint64_t c);

// Deterministic RNG stream: mt19937_64 (bit-exact per the standard) plus
// hand-rolled bounded draws so results do not depend on libstdc++ internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(splitmix64(seed)) {}

  std::uint64_t next() { return gen_(); }

  // uniform in [0, bound), bound >= 1; unbiased via rejection
  std::uint64_t below(std::uint64_t bound);

  // uniform in [lo, hi] inclusive
  std::int64_t between(std::int64_t lo, std::int64_t hi);

  // Fisher-Yates with draws from this stream
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 gen_;
};

// Independent substream for (seed, label) so draws in one component do not
// shift draws in another.
Rng derive_rng(std::uint64_t seed, std::uint64_t label);

// Uniform digit in [0, d) keyed by (seed, key): used for entangled-state
// outcomes, which must not depend on measurement order.
std::uint32_t keyed_digit(std::uint64_t seed, std::uint64_t key, std::uint32_t d);

} // namespace elab

#endif
