#ifndef ELAB_QUANTUM_HPP
#define ELAB_QUANTUM_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "elab/envelope.hpp"
#include "elab/ids.hpp"
#include "elab/messages.hpp"

namespace elab {

// Number of d-dimensional correlated states needed to name n distinct
// outcomes: ceil(log_d n).
std::uint32_t ghz_state_count(std::uint32_t n, std::int32_t dimension);

// Digits are ordered most-significant first (sequence_index 0 is the high
// digit): value = sum digit_i * d^(k-1-i).
std::int64_t compose_value(const std::vector<std::int32_t>& digits, std::int32_t dimension);

struct MeasureResult {
  std::int32_t digit = 0;
  bool decohered = false;
};

struct PreparedSet {
  Epoch epoch;
  std::vector<std::uint64_t> state_ids;  // ordered by sequence_index
  std::int32_t dimension = 2;
  SimTime coherence_deadline = TIME_NEVER;

  std::vector<ShareRef> shares() const;
};

struct GhzState {
  std::uint64_t id = 0;
  std::uint32_t sequence_index = 0;
  Epoch epoch;
  std::int32_t dimension = 2;
  NodeId preparer = NO_NODE;
  SimTime prepared_at = 0;
  SimTime coherence_deadline = TIME_NEVER;
  bool revoked = false;
  std::vector<NodeId> parties;        // sorted
  std::vector<bool> share_delivered;  // parallel to parties
  std::vector<bool> measured;         // parallel to parties
};

// Book-keeps entangled share sets without simulating amplitudes. Correlation
// is enforced by construction: a coherent state's measurement outcome is a
// pure function of (run seed, state id), so every party that measures in
// coherence sees the same digit no matter when or in what order the
// measurements happen. Once a state decoheres (its deadline passes or its
// epoch is revoked), later measurements collapse independently per holder.
class QuantumRegistry {
 public:
  QuantumRegistry(std::uint64_t run_seed, std::function<void(const QuantumEvent&)> sink);

  // Creates ceil(log_d n) states over the given parties; the preparer's own
  // shares count as delivered immediately. ttl <= 0 means never decoheres.
  PreparedSet prepare_ghz_set(Epoch epoch, const std::vector<NodeId>& parties,
                              std::int32_t dimension, SimTime ttl, NodeId preparer,
                              SimTime now);

  void record_share_delivered(std::uint64_t state_id, NodeId holder, SimTime now);

  // Throws no-such-state / no-such-share / already-measured.
  MeasureResult measure(NodeId holder, std::uint64_t state_id, SimTime now);

  // Marks every state of the epoch revoked; repeat calls are no-ops.
  void revoke_epoch(Epoch epoch, SimTime now);

  const GhzState& state(std::uint64_t id) const;
  std::size_t state_count() const { return states_.size(); }

 private:
  GhzState& state_mut(std::uint64_t id);
  void emit(const QuantumEvent& ev);

  std::uint64_t run_seed_;
  std::function<void(const QuantumEvent&)> sink_;
  std::vector<GhzState> states_;  // id == index
};

} // namespace elab

#endif
