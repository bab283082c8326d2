#ifndef ELAB_QUANTUM_ELECTION_HPP
#define ELAB_QUANTUM_ELECTION_HPP

#include "elab/engine.hpp"

namespace elab {

// Which classical protocol establishes the first leader. The takeover duel
// needs a clique; the ring protocols need a ring of the matching direction.
enum class BootstrapProtocol : std::uint8_t { bully, chang_roberts, hs };

const char* bootstrap_protocol_name(BootstrapProtocol p);

// Entanglement-assisted election. After a one-time classical bootstrap the
// incumbent leader prepares a set of shared entangled states and distributes
// one share list to every node. A reelection is a single broadcast (the
// trigger): every node measures its shares locally and all of them obtain the
// same uniformly random value B, so the node whose ID equals B is the new
// leader with no further coordination — the receivers just ack it, and the
// winner distributes fresh shares for the next round. Crashes of the winner
// are covered by a takeover duel among the IDs in the window [B, B+f] (mod n),
// and decohered or out-of-range outcomes fall back to a full duel.
struct QuantumConfig {
  std::int32_t dimension = 2;  // digits per state; values range over dimension^k
  std::uint32_t f = 0;         // declared crash bound; sizes the fallback window
  std::int64_t ttl = 0;        // share coherence budget in sim time; 0 = never expires
  SimTime heartbeat_every = 5; // leader heartbeat period H
  // Run the window duel even when nothing suggests node B crashed. Off, the
  // duel starts only when B is suspected (in the trigger) or the share wave
  // times out.
  bool window_always = false;
  BootstrapProtocol bootstrap = BootstrapProtocol::bully;

  // Scripted reelections: after every node is steady, trigger_node fires
  // trigger_rounds elections, trigger_gap apart. 0 rounds = only external
  // events (leader failure) cause reelections.
  std::int32_t trigger_rounds = 0;
  NodeId trigger_node = 0;

  // Timeouts; 0 picks a sound default from the delay model's bound (the
  // asynchronous model has none, so its max_delay stands in — detection is
  // then best-effort, which is exactly that model's point).
  SimTime trigger_gap = 0;    // default bound + 1: lets a share wave land first
  SimTime detect_timeout = 0; // default heartbeat_every + 2*bound + 1
  SimTime ack_timeout = 0;    // default 2*bound + 1
  SimTime share_timeout = 0;  // default twice the ack timeout
};

// Installs the automaton on every node after validating the config against
// the engine's topology and delay model.
void install_quantum_election(EventEngine& eng, QuantumConfig cfg = {});

} // namespace elab

#endif
