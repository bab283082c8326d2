#include "elab/rng.hpp"

#include "elab/error.hpp"

namespace elab {

const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::invalid_size: return "invalid-size";
    case ErrorCode::invalid_ids: return "invalid-ids";
    case ErrorCode::not_connected: return "not-connected";
    case ErrorCode::no_such_node: return "no-such-node";
    case ErrorCode::no_such_edge: return "no-such-edge";
    case ErrorCode::topology_mismatch: return "topology-mismatch";
    case ErrorCode::model_mismatch: return "model-mismatch";
    case ErrorCode::unsound_timeout: return "unsound-timeout";
    case ErrorCode::invalid_dimension: return "invalid-dimension";
    case ErrorCode::invalid_parties: return "invalid-parties";
    case ErrorCode::already_measured: return "already-measured";
    case ErrorCode::no_such_share: return "no-such-share";
    case ErrorCode::no_such_state: return "no-such-state";
    case ErrorCode::bootstrap_failed: return "bootstrap-failed";
    case ErrorCode::config_error: return "config-error";
    case ErrorCode::internal_error: return "internal-error";
  }
  return "unknown-error";
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t mix_key(std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(a) ^ (b + 0x517cc1b727220a95ULL));
}

std::uint64_t mix_key(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return mix_key(mix_key(a, b), c);
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw Error(ErrorCode::internal_error, "Rng::below(0)");
  if (bound == 1) return 0;
  // rejection sampling on the top of the range keeps the draw unbiased
  std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - (std::numeric_limits<std::uint64_t>::max() % bound);
  std::uint64_t v = gen_();
  while (v >= limit) v = gen_();
  return v % bound;
}

std::int64_t Rng::between(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw Error(ErrorCode::internal_error, "Rng::between empty range");
  return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
}

Rng derive_rng(std::uint64_t seed, std::uint64_t label) {
  return Rng(mix_key(seed, label));
}

std::uint32_t keyed_digit(std::uint64_t seed, std::uint64_t key, std::uint32_t d) {
  if (d < 2) throw Error(ErrorCode::invalid_dimension, "digit dimension must be >= 2");
  std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - (std::numeric_limits<std::uint64_t>::max() % d);
  std::uint64_t v = mix_key(seed, key);
  while (v >= limit) v = splitmix64(v);
  return static_cast<std::uint32_t>(v % d);
}

} // namespace elab
