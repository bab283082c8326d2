#ifndef ELAB_DELAY_HPP
#define ELAB_DELAY_HPP

#include <optional>
#include <string>
#include <variant>

#include "elab/envelope.hpp"
#include "elab/ids.hpp"
#include "elab/rng.hpp"

namespace elab {

// Predicate over envelopes, used by omission faults and the stall adversary.
// Empty fields match anything.
struct MessageMatcher {
  std::optional<std::string> tag;
  std::optional<NodeId> src;
  std::optional<NodeId> dst;
  std::optional<Channel> channel;
  SimTime after = 0;  // only messages sent at or after this time

  bool matches(const Envelope& e) const;
};

// Every delay is an integer >= 1 drawn from the model's stream.
struct SynchronousDelay {
  std::int64_t delta = 1;  // hard upper bound
};

struct PartiallySynchronousDelay {
  SimTime gst = 0;           // global stabilization time
  std::int64_t delta = 1;    // bound for messages sent at or after gst
  std::int64_t pre_bound = 0;  // bounded support before gst; 0 picks 10*delta
};

// The adversary may stall matching messages forever (delivery time beyond any
// finite horizon); everything else gets a finite draw up to max_delay.
struct AsynchronousDelay {
  std::int64_t max_delay = 20;
  std::optional<MessageMatcher> stall;
};

using DelayModel = std::variant<SynchronousDelay, PartiallySynchronousDelay, AsynchronousDelay>;

const char* delay_model_name(const DelayModel& m);

// Delay for a message sent now; nullopt means "never delivered".
std::optional<std::int64_t> draw_delay(const DelayModel& m, const Envelope& e, SimTime send_time,
                                       Rng& rng);

// Static bound on delays of messages sent at or after `t` (used for timeout
// soundness checks); nullopt for the asynchronous model.
std::optional<std::int64_t> delay_bound_after(const DelayModel& m, SimTime t);

} // namespace elab

#endif
