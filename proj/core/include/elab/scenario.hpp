#ifndef ELAB_SCENARIO_HPP
#define ELAB_SCENARIO_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "elab/delay.hpp"
#include "elab/engine.hpp"
#include "elab/quantum_election.hpp"
#include "elab/report.hpp"
#include "elab/topology.hpp"

namespace elab {

// A self-describing run request: everything that can influence the outcome
// lives here, so equal configs with equal seeds replay identical reports.
struct ScenarioConfig {
  std::string name = "scenario";
  // chang-roberts | dolev-klawe-rodeh | hirschberg-sinclair | itai-rodeh |
  // bully | quantum
  std::string protocol;
  std::uint32_t n = 0;

  std::string topology;   // "" = protocol default (ring or clique)
  std::string direction;  // "" = protocol default (uni or bi)
  bool anonymous = false;
  std::string id_order = "sorted";  // sorted | random | given
  std::vector<NodeId> ids;          // id_order == given
  std::uint64_t id_seed = 0;        // id_order == random

  std::string delay = "synchronous";  // synchronous | partially-synchronous | asynchronous
  std::int64_t delta = 1;
  SimTime gst = 0;
  std::int64_t pre_bound = 0;   // 0 picks the model default
  std::int64_t max_delay = 20;
  std::optional<MessageMatcher> stall;  // asynchronous model only

  FaultPlan faults;
  QuantumConfig quantum;  // read only when protocol == quantum
  BullyConfig bully;      // read only when protocol == bully

  std::uint64_t seed = 1;
  std::uint64_t event_limit = 1'000'000;
  bool collect_trace = true;
  std::optional<std::int32_t> decide_round;  // stop once live nodes agree at >= round
};

// Parses a JSON object with strict keys; violations raise config errors
// carrying a JSON pointer to the offending field.
ScenarioConfig parse_scenario(const std::string& json_text);

// Engine with topology, delay model, faults, and protocol nodes installed,
// ready to run.
std::unique_ptr<EventEngine> build_scenario(const ScenarioConfig& cfg);

// Build, run to completion, and package the outcome.
RunReport run_scenario(const ScenarioConfig& cfg);
RunReport run_scenario(const ScenarioConfig& cfg, Trace& trace_out);

} // namespace elab

#endif
