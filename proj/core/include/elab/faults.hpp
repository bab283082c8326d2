#ifndef ELAB_FAULTS_HPP
#define ELAB_FAULTS_HPP

#include <cstdint>
#include <vector>

#include "elab/delay.hpp"
#include "elab/ids.hpp"

namespace elab {

struct CrashFault {
  NodeId node = NO_NODE;
  SimTime at = 0;  // silent at and after this time; in-flight messages still arrive
};

// Crash-failure plan plus message omission predicates. f_max is the declared
// maximum number of simultaneous crashes; protocols use it to decide how many
// silent peers they may write off.
struct FaultPlan {
  std::uint32_t f_max = 0;
  std::vector<CrashFault> crashes;
  std::vector<MessageMatcher> omissions;
  // Adversarial crash of the measured winner: at the moment the first node
  // completes a measurement with value B, crash nodes B, B+1, ..., B+count-1
  // (mod n). 0 disables.
  std::uint32_t crash_on_measure = 0;

  void validate(std::size_t n) const;  // throws on |crashes| > f_max etc.
};

} // namespace elab

#endif
