#include "elab/quantum_election.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <vector>

#include "elab/elections.hpp"
#include "elab/error.hpp"
#include "elab/quantum.hpp"

namespace elab {

namespace {

enum class Phase : std::uint8_t {
  bootstrapping,
  preparing_shares,
  steady,
  measuring,
  awaiting_acks,
  awaiting_shares,
  fallback_bully,
};

const char* phase_name(Phase p) {
  switch (p) {
    case Phase::bootstrapping: return "bootstrapping";
    case Phase::preparing_shares: return "preparing-shares";
    case Phase::steady: return "steady";
    case Phase::measuring: return "measuring";
    case Phase::awaiting_acks: return "awaiting-acks";
    case Phase::awaiting_shares: return "awaiting-shares";
    case Phase::fallback_bully: return "fallback-bully";
  }
  return "";
}

// timer tags; the embedded duel cores and the bootstrap child get their own ranges
enum : std::int32_t {
  TIMER_HEARTBEAT = 1,
  TIMER_DETECT = 2,
  TIMER_ACKS = 3,
  TIMER_SHARES = 4,
  TIMER_TRIGGER = 5,
  DUEL_TAGS = 100,
  BOOT_TAGS = 200,
  CHILD_TAGS = 1000,
};

bool is_ring_payload(const Payload& p) {
  return std::holds_alternative<CrToken>(p) || std::holds_alternative<CrLeader>(p) ||
         std::holds_alternative<DkrOne>(p) || std::holds_alternative<DkrTwo>(p) ||
         std::holds_alternative<DkrLeader>(p) || std::holds_alternative<HsProbe>(p) ||
         std::holds_alternative<HsReply>(p) || std::holds_alternative<HsLeader>(p) ||
         std::holds_alternative<IrToken>(p) || std::holds_alternative<IrLeader>(p);
}

class QNode;

// The bootstrap child runs with re-scoped timer tags and its belief reports
// intercepted: the host turns the classical winner into epoch 0 instead of
// letting the child write engine state directly.
class BootstrapCtx final : public Ctx {
 public:
  BootstrapCtx(Ctx& inner, QNode& host) : inner_(inner), host_(host) {}

  NodeId self() const override { return inner_.self(); }
  SimTime now() const override { return inner_.now(); }
  const Topology& topology() const override { return inner_.topology(); }
  MsgId send(NodeId dst, Payload payload, Channel channel) override {
    return inner_.send(dst, std::move(payload), channel);
  }
  MsgId send_direct(NodeId dst, Payload payload, Channel channel) override {
    return inner_.send_direct(dst, std::move(payload), channel);
  }
  void set_timer(SimTime delay, std::int32_t tag, std::int64_t arg) override {
    inner_.set_timer(delay, tag + CHILD_TAGS, arg);
  }
  Rng& rng() override { return inner_.rng(); }
  QuantumRegistry& quantum() override { return inner_.quantum(); }
  void report_belief(std::optional<NodeId> leader, Epoch epoch) override;
  void report_phase(const char*) override {}  // the host owns the phase trace
  void report_rounds(std::int32_t rounds) override { inner_.report_rounds(rounds); }
  void measurement_complete(std::int64_t value) override { inner_.measurement_complete(value); }

 private:
  Ctx& inner_;
  QNode& host_;
};

class QNode final : public NodeAutomaton {
 public:
  explicit QNode(const QuantumConfig& cfg) : cfg_(cfg) {}

  void on_start(Ctx& ctx) override {
    rounds_left_ = cfg_.trigger_rounds;
    set_phase(ctx, Phase::bootstrapping);
    switch (cfg_.bootstrap) {
      case BootstrapProtocol::bully: {
        boot_core_.emplace();
        boot_core_->scope = BullyScope{BullyKind::bootstrap, Epoch{}, -1};
        boot_core_->self = ctx.self();
        boot_core_->candidates = all_nodes(ctx);
        boot_core_->audience = others(ctx);
        boot_core_->answer_timeout = cfg_.ack_timeout;
        boot_core_->coordinator_timeout = 2 * cfg_.ack_timeout;
        boot_core_->timer_base = BOOT_TAGS;
        boot_core_->on_concluded = [this](Ctx& c, const Epoch& claim, bool) {
          bootstrap_concluded(c, claim.claimant);
        };
        boot_core_->start(ctx);
        break;
      }
      case BootstrapProtocol::chang_roberts:
        child_ = make_chang_roberts_node();
        break;
      case BootstrapProtocol::hs:
        child_ = make_hs_node();
        break;
    }
    if (child_) {
      BootstrapCtx wrapped(ctx, *this);
      child_->on_start(wrapped);
    }
  }

  void on_message(Ctx& ctx, const Envelope& e) override {
    suspects_.erase(e.src);  // any message is proof of life
    if (child_ && is_ring_payload(e.payload)) {
      BootstrapCtx wrapped(ctx, *this);
      child_->on_message(wrapped, e);
      return;
    }
    if (boot_core_ && boot_core_->on_message(ctx, e)) return;
    if (duel_ && duel_->on_message(ctx, e)) return;

    if (const auto* t = std::get_if<QTrigger>(&e.payload)) {
      handle_trigger(ctx, *t);
    } else if (const auto* a = std::get_if<QAck>(&e.payload)) {
      handle_ack(ctx, e.src, a->claim);
    } else if (const auto* s = std::get_if<QShare>(&e.payload)) {
      if (s->claim > epoch_) adopt(ctx, s->claim, s->shares);  // stale sets are ignored
    } else if (const auto* h = std::get_if<Heartbeat>(&e.payload)) {
      handle_heartbeat(ctx, h->epoch);
    } else if (const auto* c = std::get_if<Coordinator>(&e.payload)) {
      handle_claim_announcement(ctx, c->claim);
    } else if (const auto* el = std::get_if<BullyElection>(&e.payload)) {
      handle_stray_challenge(ctx, e, el->scope);
    }
    // stray BullyAnswer: a duel that no longer exists; nothing to do
  }

  void on_timer(Ctx& ctx, std::int32_t tag, std::int64_t arg) override {
    if (boot_core_ && boot_core_->on_timer(ctx, tag, arg)) return;
    if (duel_ && duel_->on_timer(ctx, tag, arg)) return;
    if (tag >= CHILD_TAGS) {
      if (child_) {
        BootstrapCtx wrapped(ctx, *this);
        child_->on_timer(wrapped, tag - CHILD_TAGS, arg);
      }
      return;
    }
    switch (tag) {
      case TIMER_HEARTBEAT:
        if (arg == beat_gen_ && leader_ == ctx.self()) {
          for (NodeId o : others(ctx)) ctx.send_direct(o, Heartbeat{epoch_}, Channel::classical);
          ctx.set_timer(cfg_.heartbeat_every, TIMER_HEARTBEAT, beat_gen_);
        }
        return;
      case TIMER_DETECT:
        if (arg == detect_gen_ && phase_ == Phase::steady && leader_ && *leader_ != ctx.self()) {
          suspects_.insert(*leader_);
          initiate(ctx);
        }
        return;
      case TIMER_TRIGGER:
        if (arg == phase_gen_ && phase_ == Phase::steady && !measured_ && rounds_left_ > 0) {
          --rounds_left_;
          initiate(ctx);
        }
        return;
      case TIMER_ACKS:
        if (arg == phase_gen_ && phase_ == Phase::awaiting_acks) {
          std::size_t missing = ctx.topology().size() - 1 - acks_.size();
          if (missing <= cfg_.f)
            handover(ctx);  // the silent ones are within the declared crash budget
          else
            ctx.set_timer(cfg_.ack_timeout, TIMER_ACKS, phase_gen_);
        }
        return;
      case TIMER_SHARES:
        if (arg != phase_gen_) return;
        if (phase_ == Phase::awaiting_shares && cfg_.f > 0 && !escalated_) {
          escalated_ = true;
          suspects_.insert(claim_.claimant);  // promised shares never came
          start_window_fallback(ctx, claim_.claimant);
          return;
        }
        if (phase_ == Phase::awaiting_shares || phase_ == Phase::fallback_bully)
          ctx.set_timer(cfg_.share_timeout, TIMER_SHARES, phase_gen_);
        return;
      default:
        return;
    }
  }

  // called by the bootstrap child / bootstrap duel when the classical run concludes
  void bootstrap_concluded(Ctx& ctx, NodeId winner) {
    if (epoch_.round >= 0 || winner == NO_NODE) return;
    claim_ = Epoch{0, winner};
    if (winner == ctx.self()) {
      handover(ctx);
    } else {
      last_acked_ = claim_;  // no ack wave at bootstrap; just wait for the shares
      await_shares(ctx);
    }
  }

 private:
  static std::vector<NodeId> all_nodes(Ctx& ctx) {
    std::vector<NodeId> ids(ctx.topology().size());
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<NodeId>(i);
    return ids;
  }

  std::vector<NodeId> others(Ctx& ctx) const {
    std::vector<NodeId> ids;
    ids.reserve(ctx.topology().size() - 1);
    for (std::size_t i = 0; i < ctx.topology().size(); ++i)
      if (static_cast<NodeId>(i) != ctx.self()) ids.push_back(static_cast<NodeId>(i));
    return ids;
  }

  std::vector<NodeId> window_members(Ctx& ctx, NodeId base) const {
    // f+1 consecutive IDs starting at the measured value, wrapping so the
    // window always holds someone alive when at most f nodes crashed
    std::vector<NodeId> w;
    auto nn = static_cast<std::int64_t>(ctx.topology().size());
    for (std::uint32_t i = 0; i <= cfg_.f; ++i)
      w.push_back(static_cast<NodeId>((static_cast<std::int64_t>(base) + i) % nn));
    std::sort(w.begin(), w.end());
    w.erase(std::unique(w.begin(), w.end()), w.end());
    return w;
  }

  void set_phase(Ctx& ctx, Phase p) {
    phase_ = p;
    ++phase_gen_;
    ctx.report_phase(phase_name(p));
  }

  void initiate(Ctx& ctx) {
    std::vector<NodeId> suspects(suspects_.begin(), suspects_.end());
    for (NodeId o : others(ctx)) ctx.send_direct(o, QTrigger{epoch_, suspects}, Channel::classical);
    run_election(ctx, suspects);
  }

  void handle_trigger(Ctx& ctx, const QTrigger& t) {
    if (t.epoch == epoch_ && epoch_.round >= 0 && !measured_) {
      run_election(ctx, t.suspects);
    } else if (t.epoch > epoch_) {
      pending_trigger_ = t;  // the share wave that would let us act is still in flight
    }
    // lower epoch or already measured: a stale or duplicate trigger, dropped
  }

  void run_election(Ctx& ctx, const std::vector<NodeId>& suspects) {
    measured_ = true;
    set_phase(ctx, Phase::measuring);
    std::vector<std::int32_t> digits;
    digits.reserve(shares_.size());
    bool decohered = false;
    for (const ShareRef& ref : shares_) {
      MeasureResult r = ctx.quantum().measure(ctx.self(), ref.state_id, ctx.now());
      digits.push_back(r.digit);
      decohered = decohered || r.decohered;
    }
    last_value_ = compose_value(digits, cfg_.dimension);
    ctx.measurement_complete(last_value_);  // the crash adversary strikes here
    resolve(ctx, suspects, decohered);
  }

  void resolve(Ctx& ctx, const std::vector<NodeId>& suspects, bool decohered) {
    auto nn = static_cast<std::int64_t>(ctx.topology().size());
    const std::int32_t round = epoch_.round + 1;
    if (decohered || last_value_ >= nn) {
      // unreliable digits give different values at different nodes, and an
      // out-of-range value names nobody: duel it out among everyone
      start_duel(ctx, BullyScope{BullyKind::full, epoch_, -1}, all_nodes(ctx));
      return;
    }
    auto target = static_cast<NodeId>(last_value_);
    bool suspected = std::find(suspects.begin(), suspects.end(), target) != suspects.end();
    if (!(cfg_.window_always && cfg_.f > 0) && !suspected) {
      // the common path: the measured value itself names the leader
      if (target == ctx.self()) {
        begin_claim(ctx, Epoch{round, target});
      } else {
        send_ack(ctx, Epoch{round, target});
        await_shares(ctx);
      }
      return;
    }
    std::vector<NodeId> w = window_members(ctx, target);
    bool any_unsuspected = false;
    for (NodeId m : w)
      if (std::find(suspects.begin(), suspects.end(), m) == suspects.end()) any_unsuspected = true;
    if (!any_unsuspected) {
      start_duel(ctx, BullyScope{BullyKind::full, epoch_, -1}, all_nodes(ctx));
      return;
    }
    if (std::binary_search(w.begin(), w.end(), ctx.self())) {
      start_duel(ctx, BullyScope{BullyKind::window, epoch_, static_cast<std::int32_t>(target)}, w);
    } else {
      // outside the window: the duel's winner will announce itself
      set_phase(ctx, Phase::fallback_bully);
      ctx.set_timer(cfg_.share_timeout, TIMER_SHARES, phase_gen_);
    }
  }

  void start_duel(Ctx& ctx, BullyScope scope, std::vector<NodeId> candidates) {
    set_phase(ctx, Phase::fallback_bully);
    duel_.emplace();
    duel_->scope = scope;
    duel_->self = ctx.self();
    duel_->candidates = std::move(candidates);
    duel_->audience = others(ctx);  // the claim is announced to everyone
    duel_->answer_timeout = cfg_.ack_timeout;
    duel_->coordinator_timeout = 2 * cfg_.ack_timeout;
    duel_->timer_base = DUEL_TAGS;
    duel_->on_concluded = [this](Ctx& c, const Epoch& claim, bool won) {
      duel_concluded(c, claim, won);
    };
    duel_->start(ctx);
  }

  // a node already mid-fallback gets invited into a duel it didn't start itself
  void handle_stray_challenge(Ctx& ctx, const Envelope& e, const BullyScope& scope) {
    if (scope.epoch != epoch_) return;  // a round we've left behind
    if (phase_ == Phase::awaiting_acks && claim_.claimant == ctx.self()) {
      // someone doubts the claim we're still collecting acks for; an answer
      // makes the challenger defer until our share wave supersedes the duel
      ctx.send_direct(e.src, BullyAnswer{scope}, Channel::classical);
      return;
    }
    if (duel_) return;  // some other duel for this round already owns the tags
    std::vector<NodeId> candidates;
    if (scope.kind == BullyKind::window)
      candidates = window_members(ctx, static_cast<NodeId>(scope.window_base));
    else if (scope.kind == BullyKind::full)
      candidates = all_nodes(ctx);
    else
      return;
    start_duel(ctx, scope, std::move(candidates));
    duel_->on_message(ctx, e);
  }

  void duel_concluded(Ctx& ctx, const Epoch& claim, bool won) {
    if (claim <= epoch_) return;  // the duel outlived its round
    if (won) {
      begin_claim(ctx, claim);
    } else {
      send_ack(ctx, claim);
      await_shares(ctx);
    }
  }

  void handle_claim_announcement(Ctx& ctx, const Epoch& claim) {
    if (claim <= epoch_) return;
    if (phase_ == Phase::awaiting_acks && claim_.claimant == ctx.self() && claim_ > claim)
      return;  // our own claim outranks it; our share wave settles the race
    send_ack(ctx, claim);
    await_shares(ctx);
  }

  void send_ack(Ctx& ctx, const Epoch& claim) {
    claim_ = claim;
    // Dedup repeats only. A fallback claimant can carry a lower id than the
    // dead winner we acked first, and it still deserves its ack; rival waves
    // are safe because adoption follows the epoch order.
    if (claim != last_acked_) {
      last_acked_ = claim;
      ctx.send_direct(claim.claimant, QAck{claim}, Channel::classical);
    }
  }

  void await_shares(Ctx& ctx) {
    set_phase(ctx, Phase::awaiting_shares);
    escalated_ = false;
    ctx.set_timer(cfg_.share_timeout, TIMER_SHARES, phase_gen_);
  }

  void start_window_fallback(Ctx& ctx, NodeId base) {
    std::vector<NodeId> w = window_members(ctx, base);
    bool any_unsuspected = false;
    for (NodeId m : w)
      if (!suspects_.count(m)) any_unsuspected = true;
    if (!any_unsuspected) {
      start_duel(ctx, BullyScope{BullyKind::full, epoch_, -1}, all_nodes(ctx));
      return;
    }
    if (std::binary_search(w.begin(), w.end(), ctx.self())) {
      start_duel(ctx, BullyScope{BullyKind::window, epoch_, static_cast<std::int32_t>(base)}, w);
    } else {
      set_phase(ctx, Phase::fallback_bully);
      ctx.set_timer(cfg_.share_timeout, TIMER_SHARES, phase_gen_);
    }
  }

  void begin_claim(Ctx& ctx, const Epoch& claim) {
    claim_ = claim;
    set_phase(ctx, Phase::awaiting_acks);
    acks_.clear();
    auto it = early_acks_.find(claim);
    if (it != early_acks_.end()) {
      acks_ = std::move(it->second);
      early_acks_.erase(it);
    }
    if (acks_.size() >= ctx.topology().size() - 1) {
      handover(ctx);
      return;
    }
    ctx.set_timer(cfg_.ack_timeout, TIMER_ACKS, phase_gen_);
  }

  void handle_ack(Ctx& ctx, NodeId src, const Epoch& claim) {
    if (phase_ == Phase::awaiting_acks && claim == claim_) {
      acks_.insert(src);
      if (acks_.size() >= ctx.topology().size() - 1) handover(ctx);
    } else if (claim.claimant == ctx.self() && claim > epoch_) {
      early_acks_[claim].insert(src);  // an ack outran the trigger that explains it
    }
  }

  void handle_heartbeat(Ctx& ctx, const Epoch& e) {
    if (e == epoch_ && phase_ == Phase::steady && leader_ == e.claimant &&
        *leader_ != ctx.self()) {
      ++detect_gen_;  // push the suspicion deadline out
      ctx.set_timer(cfg_.detect_timeout, TIMER_DETECT, detect_gen_);
    }
    // a heartbeat for an epoch we haven't adopted carries no authority: only
    // the share set commits a node to a leader
  }

  // become the leader of claim_: retire the old states, prepare and
  // distribute the new set, and resume steady operation
  void handover(Ctx& ctx) {
    set_phase(ctx, Phase::preparing_shares);
    if (epoch_.round >= 0) ctx.quantum().revoke_epoch(epoch_, ctx.now());
    PreparedSet set = ctx.quantum().prepare_ghz_set(claim_, all_nodes(ctx), cfg_.dimension,
                                                    cfg_.ttl, ctx.self(), ctx.now());
    shares_ = set.shares();
    finish_transition(ctx, claim_, ctx.self());
    for (NodeId o : others(ctx)) ctx.send_direct(o, QShare{epoch_, shares_}, Channel::quantum);
    enter_steady(ctx);
  }

  void adopt(Ctx& ctx, const Epoch& claim, const std::vector<ShareRef>& refs) {
    shares_ = refs;
    std::sort(shares_.begin(), shares_.end(),
              [](const ShareRef& a, const ShareRef& b) { return a.sequence_index < b.sequence_index; });
    for (const ShareRef& ref : shares_)
      ctx.quantum().record_share_delivered(ref.state_id, ctx.self(), ctx.now());
    duel_.reset();  // any fallback for the old round is over
    finish_transition(ctx, claim, claim.claimant);
    enter_steady(ctx);
  }

  void finish_transition(Ctx& ctx, const Epoch& claim, NodeId leader) {
    epoch_ = claim;
    leader_ = leader;
    measured_ = false;
    escalated_ = false;
    suspects_.erase(leader);
    for (auto it = early_acks_.begin(); it != early_acks_.end();)
      it = it->first.round <= epoch_.round ? early_acks_.erase(it) : ++it;
    ctx.report_belief(leader_, epoch_);
    ctx.report_rounds(epoch_.round);
  }

  void enter_steady(Ctx& ctx) {
    set_phase(ctx, Phase::steady);
    if (leader_ == ctx.self()) {
      ctx.set_timer(cfg_.heartbeat_every, TIMER_HEARTBEAT, ++beat_gen_);
    } else {
      ++detect_gen_;
      ctx.set_timer(cfg_.detect_timeout, TIMER_DETECT, detect_gen_);
    }
    if (ctx.self() == cfg_.trigger_node && rounds_left_ > 0)
      ctx.set_timer(cfg_.trigger_gap, TIMER_TRIGGER, phase_gen_);
    if (pending_trigger_ && pending_trigger_->epoch == epoch_) {
      QTrigger t = std::move(*pending_trigger_);
      pending_trigger_.reset();
      run_election(ctx, t.suspects);
    } else if (pending_trigger_ && pending_trigger_->epoch < epoch_) {
      pending_trigger_.reset();
    }
  }

  QuantumConfig cfg_;
  Phase phase_ = Phase::bootstrapping;
  Epoch epoch_;                   // {-1, none} until the bootstrap concludes
  std::optional<NodeId> leader_;  // committed belief; changes only on adoption
  std::vector<ShareRef> shares_;  // current epoch's shares in sequence order
  bool measured_ = true;          // no shares yet, so nothing to measure
  std::int64_t last_value_ = -1;  // most recent composed measurement value
  bool escalated_ = false;        // this round's share timeout already acted
  Epoch claim_;                   // claim being collected (ours) or awaited (theirs)
  std::set<NodeId> acks_;
  Epoch last_acked_{-2, NO_NODE};
  std::map<Epoch, std::set<NodeId>> early_acks_;
  std::set<NodeId> suspects_;
  std::optional<QTrigger> pending_trigger_;
  std::int64_t phase_gen_ = 0;  // invalidates phase-scoped timers
  std::int64_t detect_gen_ = 0; // invalidates superseded suspicion deadlines
  std::int64_t beat_gen_ = 0;   // keeps exactly one heartbeat stream per reign
  std::int32_t rounds_left_ = 0;
  std::unique_ptr<NodeAutomaton> child_;
  std::optional<BullyCore> boot_core_;
  std::optional<BullyCore> duel_;
};

void BootstrapCtx::report_belief(std::optional<NodeId> leader, Epoch) {
  if (leader) host_.bootstrap_concluded(inner_, *leader);
}

} // namespace

const char* bootstrap_protocol_name(BootstrapProtocol p) {
  switch (p) {
    case BootstrapProtocol::bully: return "bully";
    case BootstrapProtocol::chang_roberts: return "chang-roberts";
    case BootstrapProtocol::hs: return "hs";
  }
  return "";
}

void install_quantum_election(EventEngine& eng, QuantumConfig cfg) {
  const Topology& topo = eng.topology();
  if (topo.anonymous())
    throw Error(ErrorCode::topology_mismatch,
                "measured values elect by identifier, so nodes need visible IDs");
  auto n = static_cast<std::int64_t>(topo.size());
  if (cfg.dimension < 2)
    throw Error(ErrorCode::invalid_dimension, "state dimension must be at least 2");
  if (cfg.f >= static_cast<std::uint32_t>(n))
    throw Error(ErrorCode::config_error, "the crash bound f must leave at least one node");
  if (cfg.ttl < 0) throw Error(ErrorCode::config_error, "ttl cannot be negative");
  if (cfg.heartbeat_every < 1)
    throw Error(ErrorCode::config_error, "the heartbeat period must be positive");
  if (cfg.trigger_rounds < 0)
    throw Error(ErrorCode::config_error, "trigger_rounds cannot be negative");
  if (cfg.trigger_node >= n)
    throw Error(ErrorCode::no_such_node, "trigger_node is not in the topology");
  switch (cfg.bootstrap) {
    case BootstrapProtocol::bully:
      if (topo.kind() != TopologyKind::clique)
        throw Error(ErrorCode::topology_mismatch, "the takeover bootstrap needs a clique");
      break;
    case BootstrapProtocol::chang_roberts:
      if (topo.kind() != TopologyKind::ring)
        throw Error(ErrorCode::topology_mismatch, "the circulating-token bootstrap needs a ring");
      break;
    case BootstrapProtocol::hs:
      if (topo.kind() != TopologyKind::ring || topo.direction() != RingDirection::bi)
        throw Error(ErrorCode::topology_mismatch,
                    "the doubling-probe bootstrap needs a bidirectional ring");
      break;
  }

  std::optional<std::int64_t> bound = delay_bound_after(eng.delay_model(), 0);
  std::int64_t b = bound ? *bound : std::get<AsynchronousDelay>(eng.delay_model()).max_delay;
  if (cfg.ack_timeout == 0) cfg.ack_timeout = 2 * b + 1;
  if (cfg.share_timeout == 0) cfg.share_timeout = 2 * cfg.ack_timeout;
  if (cfg.detect_timeout == 0) cfg.detect_timeout = cfg.heartbeat_every + 2 * b + 1;
  if (cfg.trigger_gap == 0) cfg.trigger_gap = b + 1;

  for (std::int64_t i = 0; i < n; ++i)
    eng.set_node(static_cast<NodeId>(i), std::make_unique<QNode>(cfg));
}

} // namespace elab
