#include "elab/engine.hpp"

#include <algorithm>
#include <string>

#include "elab/error.hpp"
#include "elab/quantum.hpp"

namespace elab {

namespace {
constexpr std::uint64_t DELAY_STREAM = 0x64656c6179ULL;  // distinct substream labels
constexpr std::uint64_t NODE_STREAM = 0x6e6f6465ULL;
} // namespace

// The per-dispatch Ctx handed to automatons. Lives on the stack of dispatch().
class EngineCtx final : public Ctx {
 public:
  EngineCtx(EventEngine& eng, NodeId node) : eng_(eng), node_(node) {}

  NodeId self() const override { return node_; }
  SimTime now() const override { return eng_.now_; }
  const Topology& topology() const override { return eng_.topology_; }

  MsgId send(NodeId dst, Payload payload, Channel channel) override {
    return eng_.do_send(node_, dst, std::move(payload), channel, false);
  }
  MsgId send_direct(NodeId dst, Payload payload, Channel channel) override {
    return eng_.do_send(node_, dst, std::move(payload), channel, true);
  }
  void set_timer(SimTime delay, std::int32_t tag, std::int64_t arg) override {
    eng_.do_set_timer(node_, delay, tag, arg);
  }
  Rng& rng() override { return eng_.node_rngs_[node_]; }
  QuantumRegistry& quantum() override { return *eng_.quantum_; }

  void report_belief(std::optional<NodeId> leader, Epoch epoch) override {
    eng_.note_belief(node_, leader, epoch);
  }
  void report_phase(const char* phase) override {
    NodeView& view = eng_.views_[node_];
    if (view.phase != phase) {
      eng_.trace_phase(node_, view.phase, phase);
      view.phase = phase;
    }
  }
  void report_rounds(std::int32_t rounds) override { eng_.views_[node_].rounds = rounds; }
  void measurement_complete(std::int64_t value) override {
    eng_.on_measurement_complete(node_, value);
  }

 private:
  EventEngine& eng_;
  NodeId node_;
};

EventEngine::EventEngine(Topology topology, DelayModel delay, FaultPlan faults,
                         EngineOptions options)
    : topology_(std::move(topology)),
      delay_(std::move(delay)),
      faults_(std::move(faults)),
      options_(options),
      delay_rng_(derive_rng(options.seed, DELAY_STREAM)) {
  faults_.validate(topology_.size());
  const std::size_t n = topology_.size();
  node_rngs_.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    node_rngs_.push_back(derive_rng(options_.seed, mix_key(NODE_STREAM, i)));
  nodes_.resize(n);
  views_.resize(n);
  crash_time_.assign(n, TIME_NEVER);
  watermark_.assign(n, 0);
  for (const CrashFault& c : faults_.crashes) {
    if (crash_time_[c.node] != TIME_NEVER) {
      ++metrics_.duplicate_crashes;
      crash_time_[c.node] = std::min(crash_time_[c.node], c.at);
    } else {
      crash_time_[c.node] = c.at;
    }
  }
  quantum_ = std::make_unique<QuantumRegistry>(options_.seed, [this](const QuantumEvent& ev) {
    if (options_.collect_trace) trace_.push_back(ev);
  });
}

EventEngine::~EventEngine() = default;

void EventEngine::set_node(NodeId id, std::unique_ptr<NodeAutomaton> automaton) {
  topology_.require_node(id);
  nodes_[id] = std::move(automaton);
}

void EventEngine::set_decision_predicate(std::function<bool(const EventEngine&)> pred) {
  decision_ = std::move(pred);
}

void EventEngine::set_measurement_hook(std::function<void(EventEngine&, NodeId, std::int64_t)> hook) {
  measurement_hook_ = std::move(hook);
}

bool EventEngine::crashed(NodeId id) const { return crash_time_[id] <= now_; }

bool EventEngine::crashed_at(NodeId id, SimTime t) const { return crash_time_[id] <= t; }

void EventEngine::inject_crash(NodeId id, SimTime at) {
  topology_.require_node(id);
  if (crash_time_[id] <= at) {
    ++metrics_.duplicate_crashes;
    return;
  }
  crash_time_[id] = at;
}

bool EventEngine::live_nodes_agree(std::int32_t min_round) const {
  std::optional<NodeId> leader;
  Epoch epoch;
  bool first = true;
  for (NodeId i = 0; i < topology_.size(); ++i) {
    if (crashed(i)) continue;
    const NodeView& v = views_[i];
    if (!v.believed_leader) return false;
    if (first) {
      leader = v.believed_leader;
      epoch = v.epoch;
      first = false;
    } else if (v.believed_leader != leader || v.epoch != epoch) {
      return false;
    }
  }
  if (first || !leader) return false;  // nobody alive / no belief
  if (crashed(*leader)) return false;
  return epoch.round >= min_round;
}

QuantumRegistry& EventEngine::quantum() { return *quantum_; }

MsgId EventEngine::do_send(NodeId src, NodeId dst, Payload payload, Channel channel, bool overlay) {
  topology_.require_node(dst);
  if (dst == src)
    throw Error(ErrorCode::no_such_edge, "node " + std::to_string(src) + " sent to itself");
  if (!overlay && !topology_.has_edge(src, dst))
    throw Error(ErrorCode::no_such_edge, "no edge " + std::to_string(src) + " -> " +
                                             std::to_string(dst) + " in " +
                                             std::string(topology_kind_name(topology_.kind())) +
                                             " topology");
  if (crashed_at(src, now_)) {
    ++metrics_.suppressed_sends;
    return 0;
  }

  Envelope env;
  env.id = static_cast<MsgId>(envelopes_.size()) + 1;
  env.src = src;
  env.dst = dst;
  env.channel = channel;
  env.send_time = now_;
  env.causal_depth = watermark_[src] + 1;
  env.sent_during = current_step_;
  env.payload = std::move(payload);

  bool omitted = std::any_of(faults_.omissions.begin(), faults_.omissions.end(),
                             [&](const MessageMatcher& m) { return m.matches(env); });
  std::optional<std::int64_t> delay;
  if (!omitted) delay = draw_delay(delay_, env, now_, delay_rng_);

  ++metrics_.messages_sent;
  if (channel == Channel::quantum)
    ++metrics_.quantum_sent;
  else
    ++metrics_.classical_sent;

  if (!delay) {
    env.status = DeliveryStatus::dropped;
    ++metrics_.dropped_messages;
  } else {
    env.deliver_time = now_ + *delay;
    queue_.push(QueuedEvent{*env.deliver_time, next_seq_++, false, envelopes_.size(), NO_NODE, 0, 0});
  }

  if (options_.collect_trace) {
    envelope_trace_index_.push_back(trace_.size());
    trace_.push_back(env);
  } else {
    envelope_trace_index_.push_back(0);
  }
  MsgId id = env.id;
  envelopes_.push_back(std::move(env));
  return id;
}

void EventEngine::do_set_timer(NodeId node, SimTime delay, std::int32_t tag, std::int64_t arg) {
  if (delay < 0) throw Error(ErrorCode::config_error, "timer delay must be >= 0");
  queue_.push(QueuedEvent{now_ + delay, next_seq_++, true, 0, node, tag, arg});
}

void EventEngine::note_belief(NodeId node, std::optional<NodeId> leader, Epoch epoch) {
  NodeView& view = views_[node];
  view.believed_leader = leader;
  view.epoch = epoch;
  belief_changed_ = true;
}

void EventEngine::trace_phase(NodeId node, const char* from, const char* to) {
  if (options_.collect_trace) trace_.push_back(PhaseEvent{node, now_, from, to});
}

void EventEngine::on_measurement_complete(NodeId node, std::int64_t value) {
  if (measurement_seen_) return;
  measurement_seen_ = true;
  const std::size_t n = topology_.size();
  for (std::uint32_t i = 0; i < faults_.crash_on_measure; ++i) {
    NodeId victim = static_cast<NodeId>((static_cast<std::uint64_t>(value) + i) % n);
    inject_crash(victim, now_);
  }
  if (measurement_hook_) measurement_hook_(*this, node, value);
}

void EventEngine::dispatch(const QueuedEvent& ev) {
  now_ = ev.time;
  current_step_ = static_cast<std::int64_t>(metrics_.wall_steps);
  ++metrics_.wall_steps;

  if (ev.is_timer) {
    if (crashed_at(ev.timer_node, ev.time)) return;
    if (NodeAutomaton* a = nodes_[ev.timer_node].get()) {
      EngineCtx ctx(*this, ev.timer_node);
      a->on_timer(ctx, ev.timer_tag, ev.timer_arg);
    }
    return;
  }

  Envelope& env = envelopes_[ev.envelope_index];
  if (crashed_at(env.dst, ev.time)) {
    env.status = DeliveryStatus::dead_dst;
    env.delivered_during = current_step_;
    ++metrics_.dead_deliveries;
  } else {
    env.status = DeliveryStatus::delivered;
    env.delivered_during = current_step_;
    watermark_[env.dst] = std::max(watermark_[env.dst], env.causal_depth);
    ++metrics_.messages_delivered;
    if (env.channel == Channel::quantum)
      ++metrics_.quantum_delivered;
    else
      ++metrics_.classical_delivered;
    metrics_.time_complexity = std::max(metrics_.time_complexity, env.causal_depth);
    if (NodeAutomaton* a = nodes_[env.dst].get()) {
      EngineCtx ctx(*this, env.dst);
      // handlers may send, growing envelopes_, so they get a stable copy
      const Envelope delivered = env;
      a->on_message(ctx, delivered);
    }
  }
  if (options_.collect_trace)
    trace_[envelope_trace_index_[ev.envelope_index]] = envelopes_[ev.envelope_index];
}

const RunMetrics& EventEngine::run() {
  if (started_) throw Error(ErrorCode::internal_error, "engine already ran; build a fresh one per run");
  started_ = true;

  for (NodeId i = 0; i < topology_.size(); ++i) {
    if (crashed_at(i, 0)) continue;
    if (NodeAutomaton* a = nodes_[i].get()) {
      EngineCtx ctx(*this, i);
      a->on_start(ctx);
    }
  }
  check_decision();

  while (!queue_.empty() && metrics_.wall_steps < options_.event_limit) {
    QueuedEvent ev = queue_.top();
    queue_.pop();
    dispatch(ev);
    check_decision();
    if (options_.stop_on_decision && metrics_.decision_step) break;
  }

  if (queue_.empty()) {
    metrics_.terminated = true;
    metrics_.quiescent_time = now_;
  }
  for (NodeId i = 0; i < topology_.size(); ++i) views_[i].alive = !crashed(i);
  return metrics_;
}

void EventEngine::check_decision() {
  if (!belief_changed_) return;
  belief_changed_ = false;
  if (!decision_ || metrics_.decision_step) return;
  if (decision_(*this)) {
    metrics_.decision_step = metrics_.wall_steps;
    metrics_.decision_time = now_;
  }
}

} // namespace elab
