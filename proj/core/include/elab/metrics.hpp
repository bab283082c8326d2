#ifndef ELAB_METRICS_HPP
#define ELAB_METRICS_HPP

#include <cstdint>
#include <functional>
#include <optional>

#include "elab/envelope.hpp"
#include "elab/ids.hpp"

namespace elab {

struct RunMetrics {
  std::uint64_t messages_sent = 0;
  std::uint64_t classical_sent = 0;
  std::uint64_t quantum_sent = 0;
  std::uint64_t messages_delivered = 0;
  std::uint64_t classical_delivered = 0;
  std::uint64_t quantum_delivered = 0;
  std::uint64_t suppressed_sends = 0;   // sends attempted by crashed nodes
  std::uint64_t dropped_messages = 0;   // omission faults and stalls
  std::uint64_t dead_deliveries = 0;    // arrived at a crashed destination
  std::uint64_t duplicate_crashes = 0;
  std::uint64_t wall_steps = 0;         // engine events processed
  std::uint32_t time_complexity = 0;    // max causal depth among delivered messages
  bool terminated = false;              // queue drained before hitting the limit
  std::optional<SimTime> quiescent_time;
  std::optional<std::uint64_t> decision_step;  // first step where the decision predicate held
  std::optional<SimTime> decision_time;
};

// Max causal depth among delivered envelopes in the trace; 0 if none.
std::uint32_t elapsed_causal_time(const Trace& trace);

// Longest delivery chain among the envelopes selected by `include`, with
// depths recomputed inside the subset (an envelope's parents are selected
// envelopes delivered to its sender no later than the step that sent it).
// This measures the causal length of one protocol exchange independently of
// whatever happened before it.
std::uint32_t causal_chain_length(const Trace& trace,
                                  const std::function<bool(const Envelope&)>& include);

// Message tallies of one election round, excluding steady-state heartbeats.
struct RoundTally {
  std::int32_t round = 0;  // the epoch round the election established
  std::uint64_t triggers = 0;
  std::uint64_t acks = 0;
  std::uint64_t shares = 0;
  std::uint64_t bully_elections = 0;
  std::uint64_t bully_answers = 0;
  std::uint64_t coordinators = 0;
  std::uint64_t total = 0;
  std::uint32_t causal_time = 0;
};

// Per-round election tallies extracted from a trace. Round r covers the
// election that moved the system from epoch round r-1 to r; round 0 is the
// bootstrap and is reported but is not a reelection.
std::vector<RoundTally> election_round_tallies(const Trace& trace);

} // namespace elab

#endif
