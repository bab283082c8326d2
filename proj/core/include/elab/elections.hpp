#ifndef ELAB_ELECTIONS_HPP
#define ELAB_ELECTIONS_HPP

#include <functional>
#include <optional>
#include <vector>

#include "elab/engine.hpp"
#include "elab/messages.hpp"

namespace elab {

// Crash-tolerant takeover duel among `candidates`: a candidate challenges
// every higher-ID candidate, takes over when none answers within
// answer_timeout, and the winner announces its claim to `audience`. Hosts
// embed one instance per duel scope (the standalone protocol, the bootstrap
// duel, and the post-measurement window/full fallbacks all reuse it).
struct BullyCore {
  BullyScope scope;
  NodeId self = NO_NODE;
  std::vector<NodeId> candidates;  // sorted; must contain self to start()
  std::vector<NodeId> audience;    // claim broadcast targets (self excluded)
  SimTime answer_timeout = 1;
  SimTime coordinator_timeout = 2;
  std::int32_t timer_base = 0;  // uses tags timer_base+0 and timer_base+1

  // called once per concluded claim (own win or accepted announcement)
  std::function<void(Ctx&, const Epoch&, bool won)> on_concluded;

  bool running = false;
  bool answered = false;
  bool done = false;
  Epoch result;
  std::int64_t generation = 0;

  void start(Ctx& ctx);
  // true when the envelope belonged to this duel and was consumed
  bool on_message(Ctx& ctx, const Envelope& e);
  // true when the timer tag belonged to this duel
  bool on_timer(Ctx& ctx, std::int32_t tag, std::int64_t arg);

 private:
  void win(Ctx& ctx);
  void conclude(Ctx& ctx, const Epoch& claim);
};

// Largest delay the model can produce for a message sent at or after t=0,
// doubled and padded: the smallest sound challenge/answer timeout. Throws
// unsound-timeout when the model has no bound at all.
SimTime sound_bully_timeout(const DelayModel& model);

struct BullyConfig {
  SimTime answer_timeout = 0;       // 0 picks the smallest sound value
  SimTime coordinator_timeout = 0;  // 0 picks twice the answer timeout
};

// Single-node ring automatons, exposed so hosts can embed one (the quantum
// election bootstraps through one of these on ring topologies).
std::unique_ptr<NodeAutomaton> make_chang_roberts_node();
std::unique_ptr<NodeAutomaton> make_hs_node();

// Installers populate every node of a fresh engine with one protocol's
// automaton, after checking the protocol's preconditions (topology shape,
// ID visibility, delay model) and throwing topology-mismatch /
// model-mismatch / unsound-timeout otherwise.
void install_chang_roberts(EventEngine& eng);  // unidirectional ring, IDs visible
void install_dkr(EventEngine& eng);            // unidirectional ring, IDs visible
void install_hs(EventEngine& eng);             // bidirectional ring, IDs visible
void install_itai_rodeh(EventEngine& eng);     // unidirectional ring, anonymous OK, synchronous only
void install_bully(EventEngine& eng, BullyConfig cfg = {});  // clique, IDs visible

struct ElectionResult {
  std::optional<NodeId> leader;  // the unanimous belief, when agreed
  bool agreed = false;           // every live node believes the same live leader
  std::vector<std::optional<NodeId>> beliefs;  // per node, crashed included
};

// Reads beliefs off an engine that already ran.
ElectionResult election_result(const EventEngine& eng);

} // namespace elab

#endif
