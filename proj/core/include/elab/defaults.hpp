#ifndef ELAB_DEFAULTS_HPP
#define ELAB_DEFAULTS_HPP

#include <cstdint>

namespace elab {

// Every constant a verdict depends on lives here, so experiment code and the
// CLI never hard-code a threshold.  Bump `version` when any value changes.
struct ClaimDefaults {
  int version = 1;

  // log-log slope bands for the complexity sweep
  double quantum_slope_lo = 0.95;
  double quantum_slope_hi = 1.05;
  double ring_quadratic_lo = 1.9;
  double ring_quadratic_hi = 2.1;
  double split_ring_slope_lo = 1.0;
  double split_ring_slope_hi = 1.35;

  // fairness experiment
  double chi2_significance = 0.01;
  std::uint64_t fairness_min_trials_factor = 100;  // trials >= factor * n

  // fault-tolerance bound: 3(n-1) + fault_constant * (f+1)^2,
  // fitted offline against the worst window duel the classical core can run
  double fault_constant = 8.25;

  // indefinite-postponement experiment
  std::uint64_t flp_event_limit = 1'000'000;  // adversary budget, in events
  std::uint64_t flp_elect_budget = 1'000;     // control must decide within this

  // probabilistic ring election: |mean observed phases - model| tolerance
  double ir_phase_tolerance = 0.15;

  // deterministic split ring bound: factor * n * (ceil(log2 n) + 1) messages
  double split_ring_bound_factor = 8.0;
};

inline const ClaimDefaults& claim_defaults() {
  static const ClaimDefaults d{};
  return d;
}

} // namespace elab

#endif
