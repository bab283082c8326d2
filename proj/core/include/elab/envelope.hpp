#ifndef ELAB_ENVELOPE_HPP
#define ELAB_ENVELOPE_HPP

#include <optional>
#include <variant>
#include <vector>

#include "elab/ids.hpp"
#include "elab/messages.hpp"

namespace elab {

enum class DeliveryStatus : std::uint8_t {
  pending,    // still in the queue
  delivered,  // processed by a live destination
  dropped,    // omission fault or stall adversary: never delivered
  dead_dst,   // destination crashed before delivery; consumed without effect
};

const char* delivery_status_name(DeliveryStatus s);

struct Envelope {
  MsgId id = 0;
  NodeId src = NO_NODE;
  NodeId dst = NO_NODE;
  Channel channel = Channel::classical;
  SimTime send_time = 0;
  std::optional<SimTime> deliver_time;  // empty: never delivered (stall / omission)
  std::uint32_t causal_depth = 0;       // 1 + max depth delivered to src before the send
  DeliveryStatus status = DeliveryStatus::pending;
  std::int64_t sent_during = -1;        // engine step whose handler sent this (-1: on_start)
  std::int64_t delivered_during = -1;   // engine step that delivered it
  Payload payload;
};

enum class QuantumEventKind : std::uint8_t { prepared, share_delivered, measured, revoked };

const char* quantum_event_kind_name(QuantumEventKind k);

struct QuantumEvent {
  QuantumEventKind kind = QuantumEventKind::prepared;
  std::uint64_t state_id = 0;
  std::uint32_t sequence_index = 0;
  NodeId node = NO_NODE;  // measuring / receiving node; NO_NODE for set-wide events
  SimTime t = 0;
  Epoch epoch;
  std::int32_t digit = -1;  // measured digit, -1 when not a measurement
  bool decohered = false;
};

struct PhaseEvent {
  NodeId node = NO_NODE;
  SimTime t = 0;
  const char* from = "";
  const char* to = "";
};

using TraceRecord = std::variant<Envelope, QuantumEvent, PhaseEvent>;
using Trace = std::vector<TraceRecord>;

} // namespace elab

#endif
