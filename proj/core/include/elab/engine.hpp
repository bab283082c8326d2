#ifndef ELAB_ENGINE_HPP
#define ELAB_ENGINE_HPP

#include <functional>
#include <memory>
#include <optional>
#include <queue>
#include <vector>

#include "elab/delay.hpp"
#include "elab/envelope.hpp"
#include "elab/faults.hpp"
#include "elab/ids.hpp"
#include "elab/messages.hpp"
#include "elab/metrics.hpp"
#include "elab/rng.hpp"
#include "elab/topology.hpp"

namespace elab {

class EventEngine;
class QuantumRegistry;

// Per-dispatch view an automaton gets of the engine. Virtual so protocol
// hosts can wrap it (a quantum node re-scopes timers and intercepts belief
// reports when it embeds a classical protocol).
class Ctx {
 public:
  virtual ~Ctx() = default;

  virtual NodeId self() const = 0;
  virtual SimTime now() const = 0;
  virtual const Topology& topology() const = 0;

  // Topology-checked send; throws no-such-edge when the link is absent.
  virtual MsgId send(NodeId dst, Payload payload, Channel channel = Channel::classical) = 0;
  // Overlay send for protocols that assume routable any-to-any reachability
  // over a connected network (the quantum election's control messages).
  virtual MsgId send_direct(NodeId dst, Payload payload, Channel channel = Channel::classical) = 0;

  virtual void set_timer(SimTime delay, std::int32_t tag, std::int64_t arg = 0) = 0;

  virtual Rng& rng() = 0;  // per-node protocol stream
  virtual QuantumRegistry& quantum() = 0;

  virtual void report_belief(std::optional<NodeId> leader, Epoch epoch) = 0;
  virtual void report_phase(const char* phase) = 0;
  virtual void report_rounds(std::int32_t rounds) = 0;
  // Adversary hook: announces a completed measurement resolution (value B).
  virtual void measurement_complete(std::int64_t value) = 0;
};

class NodeAutomaton {
 public:
  virtual ~NodeAutomaton() = default;
  virtual void on_start(Ctx&) {}
  virtual void on_message(Ctx&, const Envelope&) {}
  virtual void on_timer(Ctx&, std::int32_t tag, std::int64_t arg) { (void)tag; (void)arg; }
};

struct NodeView {
  std::optional<NodeId> believed_leader;
  Epoch epoch;
  const char* phase = "";
  std::int32_t rounds = 0;
  bool alive = true;
};

struct EngineOptions {
  std::uint64_t seed = 1;
  std::uint64_t event_limit = 1'000'000;
  bool collect_trace = true;
  bool stop_on_decision = false;
};

// Deterministic single-threaded discrete-event simulator. Events are ordered
// by (time, sequence number); sequence numbers are allocated in creation
// order, so same-time messages pop in msg_id order and runs with one (config,
// seed) replay bit-identically.
class EventEngine {
 public:
  EventEngine(Topology topology, DelayModel delay, FaultPlan faults, EngineOptions options);
  ~EventEngine();

  void set_node(NodeId id, std::unique_ptr<NodeAutomaton> automaton);

  // all-alive-agreement predicates etc.; checked whenever a belief changes
  void set_decision_predicate(std::function<bool(const EventEngine&)> pred);
  // invoked on the first measurement_complete report (crash-on-measure plans)
  void set_measurement_hook(std::function<void(EventEngine&, NodeId, std::int64_t)> hook);

  // Runs until the queue drains or the event limit is hit (or the decision
  // predicate fires, when stop_on_decision is set).
  const RunMetrics& run();

  const RunMetrics& metrics() const { return metrics_; }
  const Trace& trace() const { return trace_; }
  const Topology& topology() const { return topology_; }
  const DelayModel& delay_model() const { return delay_; }
  const FaultPlan& fault_plan() const { return faults_; }
  const std::vector<NodeView>& views() const { return views_; }
  std::uint64_t seed() const { return options_.seed; }

  bool crashed(NodeId id) const;
  bool crashed_at(NodeId id, SimTime t) const;
  void inject_crash(NodeId id, SimTime at);

  // True when every live node believes in the same leader at the same epoch,
  // and that epoch's round is at least min_round.
  bool live_nodes_agree(std::int32_t min_round) const;

  QuantumRegistry& quantum();

 private:
  friend class EngineCtx;

  struct QueuedEvent {
    SimTime time = 0;
    std::uint64_t seq = 0;
    bool is_timer = false;
    std::size_t envelope_index = 0;  // into envelopes_
    NodeId timer_node = NO_NODE;
    std::int32_t timer_tag = 0;
    std::int64_t timer_arg = 0;
  };
  struct EventAfter {
    bool operator()(const QueuedEvent& a, const QueuedEvent& b) const {
      if (a.time != b.time) return a.time > b.time;
      return a.seq > b.seq;
    }
  };

  MsgId do_send(NodeId src, NodeId dst, Payload payload, Channel channel, bool overlay);
  void do_set_timer(NodeId node, SimTime delay, std::int32_t tag, std::int64_t arg);
  void dispatch(const QueuedEvent& ev);
  void note_belief(NodeId node, std::optional<NodeId> leader, Epoch epoch);
  void trace_phase(NodeId node, const char* from, const char* to);
  void on_measurement_complete(NodeId node, std::int64_t value);
  void check_decision();

  Topology topology_;
  DelayModel delay_;
  FaultPlan faults_;
  EngineOptions options_;

  Rng delay_rng_;
  std::vector<Rng> node_rngs_;

  std::vector<std::unique_ptr<NodeAutomaton>> nodes_;
  std::vector<NodeView> views_;
  std::vector<SimTime> crash_time_;
  std::vector<std::uint32_t> watermark_;  // max causal depth delivered per node

  std::vector<Envelope> envelopes_;
  std::vector<std::size_t> envelope_trace_index_;
  std::priority_queue<QueuedEvent, std::vector<QueuedEvent>, EventAfter> queue_;
  std::uint64_t next_seq_ = 0;
  SimTime now_ = 0;
  std::int64_t current_step_ = -1;
  bool started_ = false;
  bool measurement_seen_ = false;
  bool belief_changed_ = false;

  Trace trace_;
  RunMetrics metrics_;

  std::function<bool(const EventEngine&)> decision_;
  std::function<void(EventEngine&, NodeId, std::int64_t)> measurement_hook_;

  std::unique_ptr<QuantumRegistry> quantum_;
};

} // namespace elab

#endif
