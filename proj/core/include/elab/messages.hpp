#ifndef ELAB_MESSAGES_HPP
#define ELAB_MESSAGES_HPP

#include <compare>
#include <cstdint>
#include <variant>
#include <vector>

#include "elab/ids.hpp"

namespace elab {

// Election generation marker. Ordering is lexicographic (round, claimant) so
// two concurrent claimants for the same round resolve deterministically: the
// higher node ID wins. round -1 marks "no epoch yet" (before bootstrap).
struct Epoch {
  std::int32_t round = -1;
  NodeId claimant = NO_NODE;

  auto operator<=>(const Epoch&) const = default;
};

enum class Channel : std::uint8_t { classical, quantum };

const char* channel_name(Channel c);

// Reference to one share of an entangled state, as carried inside share
// distribution messages. sequence_index orders the digits of the outcome
// value (index 0 is the most significant digit).
struct ShareRef {
  std::uint64_t state_id = 0;
  std::uint32_t sequence_index = 0;
};

// Which Bully instance a message belongs to. Replies from an older instance
// must not leak into a newer one, so participants match on the whole scope.
enum class BullyKind : std::uint8_t { standalone, bootstrap, window, full };

struct BullyScope {
  BullyKind kind = BullyKind::standalone;
  Epoch epoch;                   // epoch being superseded
  std::int32_t window_base = -1; // window kind: lowest candidate ID

  bool operator==(const BullyScope&) const = default;
};

// ---- payloads ----

struct CrToken { NodeId candidate = NO_NODE; };
struct CrLeader { NodeId leader = NO_NODE; };

// Links are not FIFO, so the duel messages carry their phase and receivers
// reorder by it.
struct DkrOne { std::int64_t value = 0; std::int32_t phase = 0; };
struct DkrTwo { std::int64_t value = 0; std::int32_t phase = 0; };
struct DkrLeader { std::int64_t value = 0; };

struct HsProbe { NodeId candidate = NO_NODE; std::int32_t phase = 0; std::int32_t hops_remaining = 0; };
struct HsReply { NodeId candidate = NO_NODE; std::int32_t phase = 0; };
struct HsLeader { NodeId leader = NO_NODE; };

struct IrToken { std::int32_t phase = 0; std::int32_t drawn = 0; std::int32_t hops = 0; bool unique = true; };
// hops drives lap termination; `leader` is engine-level bookkeeping so runs
// can check agreement — anonymous nodes never branch on it.
struct IrLeader { std::int32_t hops = 0; NodeId leader = NO_NODE; };

struct BullyElection { BullyScope scope; };
struct BullyAnswer { BullyScope scope; };
// Announces the winner's leadership claim for scope.epoch.round + 1.
struct Coordinator { BullyScope scope; Epoch claim; };

// m_E: asks every node to measure its shares for `epoch`. Carries the
// initiator's crash suspicions so all receivers resolve the window the same way.
struct QTrigger { Epoch epoch; std::vector<NodeId> suspects; };
// Acknowledges `claim` (sent to the claimant).
struct QAck { Epoch claim; };
// New share set establishing `claim`; reception is what commits a node to the
// new leader.
struct QShare { Epoch claim; std::vector<ShareRef> shares; };

struct Heartbeat { Epoch epoch; };

using Payload = std::variant<CrToken, CrLeader, DkrOne, DkrTwo, DkrLeader, HsProbe, HsReply,
                             HsLeader, IrToken, IrLeader, BullyElection, BullyAnswer, Coordinator,
                             QTrigger, QAck, QShare, Heartbeat>;

// Stable tag string per payload type, used in traces and fault matchers.
const char* payload_tag(const Payload& p);

} // namespace elab

#endif
