#include "elab/metrics.hpp"

#include <algorithm>
#include <map>

#include "elab/messages.hpp"

namespace elab {

std::uint32_t elapsed_causal_time(const Trace& trace) {
  std::uint32_t depth = 0;
  for (const TraceRecord& rec : trace) {
    const Envelope* e = std::get_if<Envelope>(&rec);
    if (e && e->status == DeliveryStatus::delivered) depth = std::max(depth, e->causal_depth);
  }
  return depth;
}

std::uint32_t causal_chain_length(const Trace& trace,
                                  const std::function<bool(const Envelope&)>& include) {
  struct Link {
    const Envelope* env;
    std::uint32_t depth = 1;
  };
  std::vector<Link> selected;
  for (const TraceRecord& rec : trace) {
    const Envelope* e = std::get_if<Envelope>(&rec);
    if (e && e->status == DeliveryStatus::delivered && include(*e)) selected.push_back(Link{e, 1});
  }
  // An envelope's parents were delivered strictly before it was sent, so
  // processing in send order sees every parent finished first.
  std::sort(selected.begin(), selected.end(),
            [](const Link& a, const Link& b) { return a.env->sent_during < b.env->sent_during; });
  std::vector<std::vector<const Link*>> by_dst;
  std::uint32_t longest = 0;
  for (Link& link : selected) {
    const Envelope& e = *link.env;
    if (e.src < by_dst.size()) {
      for (const Link* parent : by_dst[e.src]) {
        if (parent->env->delivered_during <= e.sent_during)
          link.depth = std::max(link.depth, parent->depth + 1);
      }
    }
    if (e.dst >= by_dst.size()) by_dst.resize(e.dst + 1);
    by_dst[e.dst].push_back(&link);
    longest = std::max(longest, link.depth);
  }
  return longest;
}

namespace {
// The election round a message belongs to: the election that replaces epoch
// round r-1 claims round r. Steady-state and ring-protocol traffic yields
// nothing.
std::optional<std::int32_t> election_round_of(const Payload& p) {
  if (const auto* t = std::get_if<QTrigger>(&p)) return t->epoch.round + 1;
  if (const auto* b = std::get_if<BullyElection>(&p)) return b->scope.epoch.round + 1;
  if (const auto* b = std::get_if<BullyAnswer>(&p)) return b->scope.epoch.round + 1;
  if (const auto* c = std::get_if<Coordinator>(&p)) return c->claim.round;
  if (const auto* a = std::get_if<QAck>(&p)) return a->claim.round;
  if (const auto* s = std::get_if<QShare>(&p)) return s->claim.round;
  return std::nullopt;
}
} // namespace

std::vector<RoundTally> election_round_tallies(const Trace& trace) {
  std::map<std::int32_t, RoundTally> rounds;
  for (const TraceRecord& rec : trace) {
    const Envelope* e = std::get_if<Envelope>(&rec);
    if (!e) continue;
    std::optional<std::int32_t> round = election_round_of(e->payload);
    if (!round) continue;
    RoundTally& tally = rounds[*round];
    tally.round = *round;
    ++tally.total;
    if (std::holds_alternative<QTrigger>(e->payload)) ++tally.triggers;
    else if (std::holds_alternative<QAck>(e->payload)) ++tally.acks;
    else if (std::holds_alternative<QShare>(e->payload)) ++tally.shares;
    else if (std::holds_alternative<BullyElection>(e->payload)) ++tally.bully_elections;
    else if (std::holds_alternative<BullyAnswer>(e->payload)) ++tally.bully_answers;
    else if (std::holds_alternative<Coordinator>(e->payload)) ++tally.coordinators;
  }
  std::vector<RoundTally> out;
  out.reserve(rounds.size());
  for (auto& [round, tally] : rounds) {
    tally.causal_time = causal_chain_length(trace, [round = round](const Envelope& e) {
      std::optional<std::int32_t> r = election_round_of(e.payload);
      return r && *r == round;
    });
    out.push_back(tally);
  }
  return out;
}

} // namespace elab
