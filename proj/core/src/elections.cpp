#include "elab/elections.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <string>

#include "elab/error.hpp"

namespace elab {

namespace {

void require_ring(const Topology& t, const char* protocol) {
  if (t.kind() != TopologyKind::ring)
    throw Error(ErrorCode::topology_mismatch,
                std::string(protocol) + " runs on a ring, not a " +
                    topology_kind_name(t.kind()) + " topology");
}

void require_ids(const Topology& t, const char* protocol) {
  if (t.anonymous())
    throw Error(ErrorCode::topology_mismatch,
                std::string(protocol) + " compares node IDs and cannot run anonymously");
}

NodeId succ_of(Ctx& ctx) { return ctx.topology().ring_successor(ctx.self()); }

// The neighbor a ring message continues to after arriving from `from`; on a
// two-node ring both directions coincide, so traffic bounces.
NodeId other_side(Ctx& ctx, NodeId from) {
  NodeId s = ctx.topology().ring_successor(ctx.self());
  NodeId p = ctx.topology().ring_predecessor(ctx.self());
  return from == s ? p : s;
}

// Highest ID swallows every token; the surviving token laps the ring and its
// owner announces with one more full lap.
class ChangRobertsNode final : public NodeAutomaton {
 public:
  void on_start(Ctx& ctx) override {
    ctx.report_phase("circulating");
    ctx.send(succ_of(ctx), CrToken{ctx.self()});
  }

  void on_message(Ctx& ctx, const Envelope& e) override {
    if (const auto* tok = std::get_if<CrToken>(&e.payload)) {
      if (tok->candidate > ctx.self()) {
        ctx.send(succ_of(ctx), *tok);
      } else if (tok->candidate == ctx.self()) {
        ctx.report_belief(ctx.self(), Epoch{0, ctx.self()});
        ctx.report_phase("led");
        ctx.send(succ_of(ctx), CrLeader{ctx.self()});
      }
      return;  // lower candidates are swallowed
    }
    const auto& fin = std::get<CrLeader>(e.payload);
    if (fin.leader == ctx.self()) return;  // announcement lap complete
    ctx.report_belief(fin.leader, Epoch{0, fin.leader});
    ctx.report_phase("done");
    ctx.send(succ_of(ctx), fin);
  }
};

// Value-passing duel on a unidirectional ring: each surviving round an active
// node compares its left neighbor's value against both sides and either
// adopts it or drops to relaying. The node whose value comes back announces
// the value's owner as leader.
class DkrNode final : public NodeAutomaton {
 public:
  void on_start(Ctx& ctx) override {
    value_ = static_cast<std::int64_t>(ctx.self());
    ctx.report_phase("dueling");
    ctx.send(succ_of(ctx), DkrOne{value_, 0});
  }

  void on_message(Ctx& ctx, const Envelope& e) override {
    if (const auto* fin = std::get_if<DkrLeader>(&e.payload)) {
      if (announced_) return;  // announcement returned to its origin
      NodeId leader = static_cast<NodeId>(fin->value);
      ctx.report_belief(leader, Epoch{0, leader});
      ctx.report_phase("done");
      ctx.send(succ_of(ctx), *fin);
      return;
    }
    if (relay_) {
      ctx.send(succ_of(ctx), e.payload);
      return;
    }
    buffer_.push_back(e.payload);
    drain(ctx);
  }

 private:
  void drain(Ctx& ctx) {
    bool progressed = true;
    while (progressed && !relay_ && !announced_) {
      progressed = false;
      for (auto it = buffer_.begin(); it != buffer_.end(); ++it) {
        if (const auto* one = std::get_if<DkrOne>(&*it)) {
          if (one->phase == phase_ && !have_left_) {
            DkrOne m = *one;
            buffer_.erase(it);
            handle_one(ctx, m);
            progressed = true;
            break;
          }
        } else if (const auto* two = std::get_if<DkrTwo>(&*it)) {
          if (two->phase == phase_ && have_left_) {
            DkrTwo m = *two;
            buffer_.erase(it);
            handle_two(ctx, m);
            progressed = true;
            break;
          }
        }
      }
    }
    if (relay_) {  // demoted with messages in hand: they all just forward
      for (const Payload& p : buffer_) ctx.send(succ_of(ctx), p);
      buffer_.clear();
    }
  }

  void handle_one(Ctx& ctx, const DkrOne& m) {
    if (m.value == value_) {
      // my value survived a full lap: it is the ring maximum
      announced_ = true;
      NodeId leader = static_cast<NodeId>(value_);
      ctx.report_belief(leader, Epoch{0, leader});
      ctx.report_phase("done");
      ctx.send(succ_of(ctx), DkrLeader{value_});
      return;
    }
    left_ = m.value;
    have_left_ = true;
    ctx.send(succ_of(ctx), DkrTwo{m.value, phase_});
  }

  void handle_two(Ctx& ctx, const DkrTwo& m) {
    if (left_ > value_ && left_ > m.value) {
      value_ = left_;
      have_left_ = false;
      ++phase_;
      ctx.send(succ_of(ctx), DkrOne{value_, phase_});
    } else {
      relay_ = true;
      ctx.report_phase("relaying");
    }
  }

  bool relay_ = false;
  bool have_left_ = false;
  bool announced_ = false;
  std::int32_t phase_ = 0;
  std::int64_t value_ = 0;
  std::int64_t left_ = 0;
  std::vector<Payload> buffer_;
};

// Doubling-radius probes in both directions; turnaround replies route back by
// arrival port. The probe that laps the whole ring crowns its sender.
class HsNode final : public NodeAutomaton {
 public:
  void on_start(Ctx& ctx) override {
    ctx.report_phase("probing");
    send_probes(ctx);
  }

  void on_message(Ctx& ctx, const Envelope& e) override {
    if (const auto* probe = std::get_if<HsProbe>(&e.payload)) {
      if (probe->candidate == ctx.self()) {
        if (won_) return;  // the opposite-direction probe also came home
        won_ = true;
        ctx.report_belief(ctx.self(), Epoch{0, ctx.self()});
        ctx.report_phase("led");
        ctx.send(succ_of(ctx), HsLeader{ctx.self()});
      } else if (probe->candidate > ctx.self()) {
        if (probe->hops_remaining > 1)
          ctx.send(other_side(ctx, e.src),
                   HsProbe{probe->candidate, probe->phase, probe->hops_remaining - 1});
        else
          ctx.send(e.src, HsReply{probe->candidate, probe->phase});
      }
      // weaker probes are swallowed: their sender never hears back
      return;
    }
    if (const auto* reply = std::get_if<HsReply>(&e.payload)) {
      if (reply->candidate != ctx.self()) {
        ctx.send(other_side(ctx, e.src), *reply);
      } else if (reply->phase == phase_ && !won_) {
        if (++replies_ == expected_) {
          ++phase_;
          send_probes(ctx);
        }
      }
      return;
    }
    const auto& fin = std::get<HsLeader>(e.payload);
    if (fin.leader == ctx.self()) return;
    ctx.report_belief(fin.leader, Epoch{0, fin.leader});
    ctx.report_phase("done");
    ctx.send(other_side(ctx, e.src), fin);
  }

 private:
  void send_probes(Ctx& ctx) {
    NodeId s = ctx.topology().ring_successor(ctx.self());
    NodeId p = ctx.topology().ring_predecessor(ctx.self());
    std::int32_t reach = 1 << phase_;
    replies_ = 0;
    expected_ = s == p ? 1 : 2;
    ctx.send(s, HsProbe{ctx.self(), phase_, reach});
    if (s != p) ctx.send(p, HsProbe{ctx.self(), phase_, reach});
  }

  bool won_ = false;
  std::int32_t phase_ = 0;
  std::int32_t replies_ = 0;
  std::int32_t expected_ = 2;
};

// Anonymous lottery on a ring of known size: every phase the still-active
// nodes draw, full-lap tokens compare draws, and a token that returns home
// still marked unique crowns its (anonymous) origin. Draw comparisons use the
// receiver's draw recorded for the token's own phase, so stragglers from
// finished phases resolve exactly as they would have live.
class IrNode final : public NodeAutomaton {
 public:
  void on_start(Ctx& ctx) override {
    n_ = static_cast<std::int32_t>(ctx.topology().size());
    ctx.report_phase("drawing");
    begin_phase(ctx, 0);
  }

  void on_message(Ctx& ctx, const Envelope& e) override {
    if (const auto* fin = std::get_if<IrLeader>(&e.payload)) {
      if (fin->hops >= n_) return;  // lap complete, back at the winner
      ctx.report_belief(fin->leader, Epoch{0, fin->leader});
      ctx.report_phase("done");
      ctx.send(succ_of(ctx), IrLeader{fin->hops + 1, fin->leader});
      return;
    }
    handle_token(ctx, std::get<IrToken>(e.payload));
  }

 private:
  void begin_phase(Ctx& ctx, std::int32_t p) {
    phase_ = p;
    draws_[p] = static_cast<std::int32_t>(ctx.rng().below(static_cast<std::uint64_t>(n_)));
    ctx.send(succ_of(ctx), IrToken{p, draws_[p], 1, true});
    drain(ctx);
  }

  void handle_token(Ctx& ctx, const IrToken& tok) {
    if (!active_) {
      // a demoted node's own token coming home is dead; everything else relays
      if (tok.hops < n_)
        ctx.send(succ_of(ctx), IrToken{tok.phase, tok.drawn, tok.hops + 1, tok.unique});
      return;
    }
    if (tok.hops == n_) {  // my token survived the lap
      if (tok.unique) {
        active_ = false;
        ctx.report_belief(ctx.self(), Epoch{0, ctx.self()});
        ctx.report_phase("led");
        ctx.send(succ_of(ctx), IrLeader{1, ctx.self()});
      } else {
        begin_phase(ctx, phase_ + 1);
      }
      return;
    }
    auto mine = draws_.find(tok.phase);
    if (mine == draws_.end()) {  // a phase I have not reached: hold the token
      buffer_.push_back(tok);
      return;
    }
    if (tok.drawn > mine->second) {
      bool current = tok.phase == phase_;
      ctx.send(succ_of(ctx), IrToken{tok.phase, tok.drawn, tok.hops + 1, tok.unique});
      if (current) demote(ctx);
    } else if (tok.drawn == mine->second) {
      ctx.send(succ_of(ctx), IrToken{tok.phase, tok.drawn, tok.hops + 1, false});
    }
    // lower draws are swallowed
  }

  void demote(Ctx& ctx) {
    active_ = false;
    ctx.report_phase("relaying");
    for (const IrToken& t : buffer_)
      ctx.send(succ_of(ctx), IrToken{t.phase, t.drawn, t.hops + 1, t.unique});
    buffer_.clear();
  }

  void drain(Ctx& ctx) {
    for (std::size_t i = 0; i < buffer_.size() && active_;) {
      if (buffer_[i].phase <= phase_) {
        IrToken t = buffer_[i];
        buffer_.erase(buffer_.begin() + static_cast<std::ptrdiff_t>(i));
        handle_token(ctx, t);  // may advance the phase or demote
        i = 0;
      } else {
        ++i;
      }
    }
  }

  bool active_ = true;
  std::int32_t n_ = 0;
  std::int32_t phase_ = 0;
  std::map<std::int32_t, std::int32_t> draws_;  // my draw at each phase I was active
  std::vector<IrToken> buffer_;
};

class BullyNode final : public NodeAutomaton {
 public:
  BullyNode(SimTime answer_timeout, SimTime coordinator_timeout)
      : answer_timeout_(answer_timeout), coordinator_timeout_(coordinator_timeout) {}

  void on_start(Ctx& ctx) override {
    core_.scope = BullyScope{BullyKind::standalone, Epoch{-1, NO_NODE}, -1};
    core_.self = ctx.self();
    const NodeId n = static_cast<NodeId>(ctx.topology().size());
    for (NodeId i = 0; i < n; ++i) {
      core_.candidates.push_back(i);
      if (i != ctx.self()) core_.audience.push_back(i);
    }
    core_.answer_timeout = answer_timeout_;
    core_.coordinator_timeout = coordinator_timeout_;
    core_.on_concluded = [](Ctx& c, const Epoch& claim, bool) {
      c.report_belief(claim.claimant, claim);
      c.report_phase("done");
    };
    ctx.report_phase("challenging");
    core_.start(ctx);
  }

  void on_message(Ctx& ctx, const Envelope& e) override { core_.on_message(ctx, e); }
  void on_timer(Ctx& ctx, std::int32_t tag, std::int64_t arg) override {
    core_.on_timer(ctx, tag, arg);
  }

 private:
  BullyCore core_;
  SimTime answer_timeout_;
  SimTime coordinator_timeout_;
};

} // namespace

void BullyCore::start(Ctx& ctx) {
  running = true;
  answered = false;
  ++generation;
  bool any_higher = false;
  for (NodeId c : candidates) {
    if (c > self) {
      any_higher = true;
      ctx.send_direct(c, BullyElection{scope});
    }
  }
  if (!any_higher) {
    win(ctx);
    return;
  }
  ctx.set_timer(answer_timeout, timer_base + 0, generation);
}

void BullyCore::win(Ctx& ctx) {
  running = false;
  done = true;
  result = Epoch{scope.epoch.round + 1, self};
  for (NodeId a : audience)
    if (a != self) ctx.send_direct(a, Coordinator{scope, result});
  if (on_concluded) on_concluded(ctx, result, true);
}

void BullyCore::conclude(Ctx& ctx, const Epoch& claim) {
  running = false;
  done = true;
  result = claim;
  if (on_concluded) on_concluded(ctx, claim, claim.claimant == self);
}

bool BullyCore::on_message(Ctx& ctx, const Envelope& e) {
  if (const auto* el = std::get_if<BullyElection>(&e.payload)) {
    if (el->scope != scope) return false;
    ctx.send_direct(e.src, BullyAnswer{scope});
    if (!done && !running && std::binary_search(candidates.begin(), candidates.end(), self))
      start(ctx);
    return true;
  }
  if (const auto* an = std::get_if<BullyAnswer>(&e.payload)) {
    if (an->scope != scope) return false;
    if (done || !running) return true;
    answered = true;
    ctx.set_timer(coordinator_timeout, timer_base + 1, generation);
    return true;
  }
  if (const auto* co = std::get_if<Coordinator>(&e.payload)) {
    if (co->scope != scope) return false;
    if (done) {
      // a higher claim supersedes: a live higher candidate pressed on
      if (co->claim > result) {
        result = co->claim;
        if (on_concluded) on_concluded(ctx, co->claim, false);
      }
      return true;
    }
    if (running && co->claim.claimant < self) return true;  // outrank it: keep pressing
    conclude(ctx, co->claim);
    return true;
  }
  return false;
}

bool BullyCore::on_timer(Ctx& ctx, std::int32_t tag, std::int64_t arg) {
  if (tag == timer_base + 0) {
    if (arg == generation && running && !done && !answered) win(ctx);
    return true;
  }
  if (tag == timer_base + 1) {
    if (arg == generation && running && !done) start(ctx);  // expected claim never came
    return true;
  }
  return false;
}

SimTime sound_bully_timeout(const DelayModel& model) {
  std::optional<std::int64_t> bound = delay_bound_after(model, 0);
  if (!bound)
    throw Error(ErrorCode::unsound_timeout,
                "the asynchronous model has no delay bound to time out against");
  return 2 * *bound + 1;
}

std::unique_ptr<NodeAutomaton> make_chang_roberts_node() {
  return std::make_unique<ChangRobertsNode>();
}

std::unique_ptr<NodeAutomaton> make_hs_node() { return std::make_unique<HsNode>(); }

void install_chang_roberts(EventEngine& eng) {
  require_ring(eng.topology(), "the circulating-token protocol");
  require_ids(eng.topology(), "the circulating-token protocol");
  for (NodeId i = 0; i < eng.topology().size(); ++i)
    eng.set_node(i, make_chang_roberts_node());
}

void install_dkr(EventEngine& eng) {
  require_ring(eng.topology(), "the value-duel ring protocol");
  require_ids(eng.topology(), "the value-duel ring protocol");
  for (NodeId i = 0; i < eng.topology().size(); ++i) eng.set_node(i, std::make_unique<DkrNode>());
}

void install_hs(EventEngine& eng) {
  require_ring(eng.topology(), "the doubling-probe protocol");
  if (eng.topology().direction() != RingDirection::bi)
    throw Error(ErrorCode::topology_mismatch,
                "the doubling-probe protocol needs a bidirectional ring");
  require_ids(eng.topology(), "the doubling-probe protocol");
  for (NodeId i = 0; i < eng.topology().size(); ++i) eng.set_node(i, make_hs_node());
}

void install_itai_rodeh(EventEngine& eng) {
  require_ring(eng.topology(), "the anonymous lottery protocol");
  if (!std::holds_alternative<SynchronousDelay>(eng.delay_model()))
    throw Error(ErrorCode::model_mismatch,
                "the anonymous lottery protocol is only analyzed under bounded synchronous "
                "delays; pick the synchronous model");
  for (NodeId i = 0; i < eng.topology().size(); ++i) eng.set_node(i, std::make_unique<IrNode>());
}

void install_bully(EventEngine& eng, BullyConfig cfg) {
  if (eng.topology().kind() != TopologyKind::clique)
    throw Error(ErrorCode::topology_mismatch, "the takeover protocol challenges every higher ID "
                                              "directly and needs a clique");
  require_ids(eng.topology(), "the takeover protocol");
  const SimTime sound = sound_bully_timeout(eng.delay_model());
  SimTime answer = cfg.answer_timeout == 0 ? sound : cfg.answer_timeout;
  if (answer < sound)
    throw Error(ErrorCode::unsound_timeout,
                "answer timeout " + std::to_string(answer) + " is below the sound minimum " +
                    std::to_string(sound) + " (a live reply can take that long)");
  SimTime coordinator = cfg.coordinator_timeout == 0 ? 2 * answer : cfg.coordinator_timeout;
  for (NodeId i = 0; i < eng.topology().size(); ++i)
    eng.set_node(i, std::make_unique<BullyNode>(answer, coordinator));
}

ElectionResult election_result(const EventEngine& eng) {
  ElectionResult r;
  const std::vector<NodeView>& views = eng.views();
  r.beliefs.reserve(views.size());
  for (const NodeView& v : views) r.beliefs.push_back(v.believed_leader);

  std::optional<NodeId> leader;
  bool agreed = true;
  bool any_live = false;
  for (NodeId i = 0; i < views.size(); ++i) {
    if (eng.crashed(i)) continue;
    any_live = true;
    const std::optional<NodeId>& b = views[i].believed_leader;
    if (!b) {
      agreed = false;
      break;
    }
    if (!leader)
      leader = b;
    else if (*leader != *b) {
      agreed = false;
      break;
    }
  }
  if (agreed && any_live && leader && !eng.crashed(*leader)) {
    r.agreed = true;
    r.leader = leader;
  }
  return r;
}

} // namespace elab
