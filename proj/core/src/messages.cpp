#include "elab/messages.hpp"

#include <algorithm>
#include <unordered_set>

#include "elab/delay.hpp"
#include "elab/envelope.hpp"
#include "elab/error.hpp"
#include "elab/faults.hpp"

namespace elab {

const char* channel_name(Channel c) {
  return c == Channel::quantum ? "quantum" : "classical";
}

const char* delivery_status_name(DeliveryStatus s) {
  switch (s) {
    case DeliveryStatus::pending: return "pending";
    case DeliveryStatus::delivered: return "delivered";
    case DeliveryStatus::dropped: return "dropped";
    case DeliveryStatus::dead_dst: return "dead-dst";
  }
  return "unknown";
}

const char* quantum_event_kind_name(QuantumEventKind k) {
  switch (k) {
    case QuantumEventKind::prepared: return "prepared";
    case QuantumEventKind::share_delivered: return "share-delivered";
    case QuantumEventKind::measured: return "measured";
    case QuantumEventKind::revoked: return "revoked";
  }
  return "unknown";
}

const char* payload_tag(const Payload& p) {
  struct Tagger {
    const char* operator()(const CrToken&) const { return "cr_token"; }
    const char* operator()(const CrLeader&) const { return "cr_leader"; }
    const char* operator()(const DkrOne&) const { return "dkr_one"; }
    const char* operator()(const DkrTwo&) const { return "dkr_two"; }
    const char* operator()(const DkrLeader&) const { return "dkr_leader"; }
    const char* operator()(const HsProbe&) const { return "hs_probe"; }
    const char* operator()(const HsReply&) const { return "hs_reply"; }
    const char* operator()(const HsLeader&) const { return "hs_leader"; }
    const char* operator()(const IrToken&) const { return "ir_token"; }
    const char* operator()(const IrLeader&) const { return "ir_leader"; }
    const char* operator()(const BullyElection&) const { return "bully_election"; }
    const char* operator()(const BullyAnswer&) const { return "bully_answer"; }
    const char* operator()(const Coordinator&) const { return "coordinator"; }
    const char* operator()(const QTrigger&) const { return "q_trigger"; }
    const char* operator()(const QAck&) const { return "q_ack"; }
    const char* operator()(const QShare&) const { return "q_share"; }
    const char* operator()(const Heartbeat&) const { return "heartbeat"; }
  };
  return std::visit(Tagger{}, p);
}

bool MessageMatcher::matches(const Envelope& e) const {
  if (e.send_time < after) return false;
  if (tag && *tag != payload_tag(e.payload)) return false;
  if (src && *src != e.src) return false;
  if (dst && *dst != e.dst) return false;
  if (channel && *channel != e.channel) return false;
  return true;
}

const char* delay_model_name(const DelayModel& m) {
  struct Namer {
    const char* operator()(const SynchronousDelay&) const { return "synchronous"; }
    const char* operator()(const PartiallySynchronousDelay&) const { return "partially-synchronous"; }
    const char* operator()(const AsynchronousDelay&) const { return "asynchronous"; }
  };
  return std::visit(Namer{}, m);
}

std::optional<std::int64_t> draw_delay(const DelayModel& m, const Envelope& e, SimTime send_time,
                                       Rng& rng) {
  struct Drawer {
    const Envelope& e;
    SimTime send_time;
    Rng& rng;

    std::optional<std::int64_t> operator()(const SynchronousDelay& d) const {
      return rng.between(1, d.delta);
    }
    std::optional<std::int64_t> operator()(const PartiallySynchronousDelay& d) const {
      std::int64_t bound = send_time >= d.gst ? d.delta
                                              : (d.pre_bound > 0 ? d.pre_bound : 10 * d.delta);
      return rng.between(1, bound);
    }
    std::optional<std::int64_t> operator()(const AsynchronousDelay& d) const {
      // The adversary's choice consumes a draw either way, so toggling the
      // stall predicate never perturbs the delays of unrelated messages.
      std::int64_t v = rng.between(1, d.max_delay);
      if (d.stall && d.stall->matches(e)) return std::nullopt;
      return v;
    }
  };
  return std::visit(Drawer{e, send_time, rng}, m);
}

std::optional<std::int64_t> delay_bound_after(const DelayModel& m, SimTime t) {
  struct Bounder {
    SimTime t;
    std::optional<std::int64_t> operator()(const SynchronousDelay& d) const { return d.delta; }
    std::optional<std::int64_t> operator()(const PartiallySynchronousDelay& d) const {
      if (t >= d.gst) return d.delta;
      std::int64_t pre = d.pre_bound > 0 ? d.pre_bound : 10 * d.delta;
      return std::max(pre, d.delta);
    }
    std::optional<std::int64_t> operator()(const AsynchronousDelay&) const { return std::nullopt; }
  };
  return std::visit(Bounder{t}, m);
}

void FaultPlan::validate(std::size_t n) const {
  std::unordered_set<NodeId> seen;
  for (const CrashFault& c : crashes) {
    if (c.node >= n)
      throw Error(ErrorCode::no_such_node, "crash fault names node " + std::to_string(c.node) +
                                               " outside 0.." + std::to_string(n - 1));
    if (c.at < 0) throw Error(ErrorCode::config_error, "crash time must be >= 0");
    seen.insert(c.node);
  }
  std::size_t planned = seen.size() + crash_on_measure;
  if (planned > f_max)
    throw Error(ErrorCode::config_error,
                "fault plan schedules " + std::to_string(planned) + " crashes but f_max is " +
                    std::to_string(f_max));
  if (f_max >= n)
    throw Error(ErrorCode::config_error, "f_max must leave at least one node alive");
}

} // namespace elab
