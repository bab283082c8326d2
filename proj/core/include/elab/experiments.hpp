#ifndef ELAB_EXPERIMENTS_HPP
#define ELAB_EXPERIMENTS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "elab/report.hpp"
#include "elab/scenario.hpp"

namespace elab {

// ---- complexity sweep ----

struct SweepCell {
  std::string protocol;
  std::uint32_t n = 0;
  std::uint64_t worst = 0;
  double mean = 0;
};

struct SweepResult {
  std::vector<SweepCell> cells;
  std::vector<Verdict> verdicts;  // slope band edges, two per protocol
  std::string csv;
};

// Election-message growth against network size. Worst case per size is taken
// over adversarial inputs (descending ring IDs, every clique node initiating)
// and the seed list; log-log slopes are fitted on the worst counts and
// checked against the band each protocol claims.
SweepResult sweep_complexity(const std::vector<std::string>& protocols,
                             const std::vector<std::uint32_t>& sizes,
                             const std::vector<std::uint64_t>& seeds);

// ---- winner fairness ----

struct FairnessResult {
  std::uint32_t n = 0;
  std::uint64_t trials = 0;
  std::vector<std::uint64_t> wins;  // indexed by node id
  double stat = 0;
  double p_value = 0;
  bool underpowered = false;  // fewer trials than the minimum for a verdict
  Verdict verdict;
  std::string csv;
};

// One long fault-free run with `trials` scripted reelections; winners are
// tallied and tested chi-square against the uniform distribution. n must be
// a power of the state dimension (2), otherwise the outcome distribution is
// not uniform by construction and the experiment is refused.
FairnessResult experiment_fairness(std::uint32_t n, std::uint64_t trials, std::uint64_t seed);

// ---- indefinite postponement ----

struct StallResult {
  RunReport stalled;
  RunReport control;
  std::vector<Verdict> verdicts;
};

// Asynchronous adversary that stalls one message kind ("trigger", "ack", or
// "share") from shortly after bootstrap, paired with a control run without
// the adversary. The stalled run must neither decide nor terminate within
// the event budget; the control must elect quickly.
StallResult experiment_flp_stall(std::uint32_t n, const std::string& target, std::uint64_t seed);

// ---- crash tolerance ----

struct FaultRow {
  std::uint32_t f = 0;
  std::uint64_t seed = 0;
  std::uint64_t messages = 0;  // reelection round, all channels
  std::optional<NodeId> leader;
  bool agreed = false;
};

struct FaultToleranceResult {
  std::uint32_t n = 0;
  std::vector<FaultRow> rows;
  std::vector<Verdict> verdicts;  // per f: message bound and full agreement
  std::string csv;
};

// Crashes the measured winner and its f-1 successors at the measurement
// instant, then checks every recovery stayed within 3(n-1) + c(f+1)^2
// messages and converged on a live leader. f >= n is refused.
FaultToleranceResult experiment_fault_tolerance(std::uint32_t n,
                                                const std::vector<std::uint32_t>& f_list,
                                                const std::vector<std::uint64_t>& seeds);

} // namespace elab

#endif
