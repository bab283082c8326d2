#include "elab/quantum.hpp"

#include <algorithm>
#include <string>

#include "elab/error.hpp"
#include "elab/rng.hpp"

namespace elab {

namespace {
constexpr std::uint64_t DECOHERED_SALT = 0x6465636fULL;  // separates per-holder collapse keys

std::size_t party_index(const GhzState& s, NodeId holder) {
  auto it = std::lower_bound(s.parties.begin(), s.parties.end(), holder);
  if (it == s.parties.end() || *it != holder)
    throw Error(ErrorCode::no_such_share, "node " + std::to_string(holder) +
                                              " holds no share of state " + std::to_string(s.id));
  return static_cast<std::size_t>(it - s.parties.begin());
}
} // namespace

std::uint32_t ghz_state_count(std::uint32_t n, std::int32_t dimension) {
  std::uint32_t k = 0;
  std::uint64_t reach = 1;
  while (reach < n) {
    reach *= static_cast<std::uint64_t>(dimension);
    ++k;
  }
  return std::max<std::uint32_t>(k, 1);
}

std::int64_t compose_value(const std::vector<std::int32_t>& digits, std::int32_t dimension) {
  std::int64_t v = 0;
  for (std::int32_t d : digits) v = v * dimension + d;
  return v;
}

std::vector<ShareRef> PreparedSet::shares() const {
  std::vector<ShareRef> out;
  out.reserve(state_ids.size());
  for (std::size_t i = 0; i < state_ids.size(); ++i)
    out.push_back(ShareRef{state_ids[i], static_cast<std::uint32_t>(i)});
  return out;
}

QuantumRegistry::QuantumRegistry(std::uint64_t run_seed,
                                 std::function<void(const QuantumEvent&)> sink)
    : run_seed_(run_seed), sink_(std::move(sink)) {}

void QuantumRegistry::emit(const QuantumEvent& ev) {
  if (sink_) sink_(ev);
}

PreparedSet QuantumRegistry::prepare_ghz_set(Epoch epoch, const std::vector<NodeId>& parties,
                                             std::int32_t dimension, SimTime ttl, NodeId preparer,
                                             SimTime now) {
  if (dimension < 2)
    throw Error(ErrorCode::invalid_dimension,
                "state dimension must be >= 2, got " + std::to_string(dimension));
  if (parties.size() < 2)
    throw Error(ErrorCode::invalid_parties, "an entangled set needs at least 2 parties");
  std::vector<NodeId> sorted = parties;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw Error(ErrorCode::invalid_parties, "duplicate party in entangled set");
  if (!std::binary_search(sorted.begin(), sorted.end(), preparer))
    throw Error(ErrorCode::invalid_parties,
                "preparer " + std::to_string(preparer) + " must hold a share itself");

  const std::uint32_t k = ghz_state_count(static_cast<std::uint32_t>(sorted.size()), dimension);
  const SimTime deadline = ttl > 0 ? now + ttl : TIME_NEVER;

  PreparedSet set;
  set.epoch = epoch;
  set.dimension = dimension;
  set.coherence_deadline = deadline;
  set.state_ids.reserve(k);

  const std::size_t preparer_idx =
      static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), preparer) -
                               sorted.begin());
  for (std::uint32_t seq = 0; seq < k; ++seq) {
    GhzState s;
    s.id = static_cast<std::uint64_t>(states_.size());
    s.sequence_index = seq;
    s.epoch = epoch;
    s.dimension = dimension;
    s.preparer = preparer;
    s.prepared_at = now;
    s.coherence_deadline = deadline;
    s.parties = sorted;
    s.share_delivered.assign(sorted.size(), false);
    s.share_delivered[preparer_idx] = true;
    s.measured.assign(sorted.size(), false);
    set.state_ids.push_back(s.id);
    emit(QuantumEvent{QuantumEventKind::prepared, s.id, seq, preparer, now, epoch, -1, false});
    states_.push_back(std::move(s));
  }
  return set;
}

GhzState& QuantumRegistry::state_mut(std::uint64_t id) {
  if (id >= states_.size())
    throw Error(ErrorCode::no_such_state, "unknown entangled state " + std::to_string(id));
  return states_[static_cast<std::size_t>(id)];
}

const GhzState& QuantumRegistry::state(std::uint64_t id) const {
  if (id >= states_.size())
    throw Error(ErrorCode::no_such_state, "unknown entangled state " + std::to_string(id));
  return states_[static_cast<std::size_t>(id)];
}

void QuantumRegistry::record_share_delivered(std::uint64_t state_id, NodeId holder, SimTime now) {
  GhzState& s = state_mut(state_id);
  const std::size_t idx = party_index(s, holder);
  if (s.share_delivered[idx]) return;
  s.share_delivered[idx] = true;
  emit(QuantumEvent{QuantumEventKind::share_delivered, s.id, s.sequence_index, holder, now, s.epoch,
                    -1, false});
}

MeasureResult QuantumRegistry::measure(NodeId holder, std::uint64_t state_id, SimTime now) {
  GhzState& s = state_mut(state_id);
  const std::size_t idx = party_index(s, holder);
  if (!s.share_delivered[idx])
    throw Error(ErrorCode::no_such_share, "share of state " + std::to_string(state_id) +
                                              " not yet delivered to node " +
                                              std::to_string(holder));
  if (s.measured[idx])
    throw Error(ErrorCode::already_measured, "node " + std::to_string(holder) +
                                                 " already measured state " +
                                                 std::to_string(state_id));
  s.measured[idx] = true;

  MeasureResult r;
  r.decohered = s.revoked || now > s.coherence_deadline;
  // Coherent outcomes are a function of (run seed, state) alone, so every
  // party agrees regardless of measurement order. Decohered shares collapse
  // independently, keyed per holder.
  const std::uint64_t key = r.decohered ? mix_key(s.id, DECOHERED_SALT, holder) : s.id;
  r.digit = static_cast<std::int32_t>(
      keyed_digit(run_seed_, key, static_cast<std::uint32_t>(s.dimension)));
  emit(QuantumEvent{QuantumEventKind::measured, s.id, s.sequence_index, holder, now, s.epoch,
                    r.digit, r.decohered});
  return r;
}

void QuantumRegistry::revoke_epoch(Epoch epoch, SimTime now) {
  for (GhzState& s : states_) {
    if (s.epoch != epoch || s.revoked) continue;
    s.revoked = true;
    emit(QuantumEvent{QuantumEventKind::revoked, s.id, s.sequence_index, s.preparer, now, s.epoch,
                      -1, true});
  }
}

} // namespace elab
