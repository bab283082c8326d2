#include "elab/experiments.hpp"

#include <algorithm>
#include <cmath>

#include "elab/defaults.hpp"
#include "elab/error.hpp"
#include "elab/stats.hpp"

namespace elab {

namespace {

std::uint64_t count_tags(const Trace& trace, std::initializer_list<const char*> tags) {
  std::uint64_t c = 0;
  for (const TraceRecord& rec : trace) {
    const auto* e = std::get_if<Envelope>(&rec);
    if (!e) continue;
    const std::string_view t = payload_tag(e->payload);
    for (const char* want : tags)
      if (t == want) {
        ++c;
        break;
      }
  }
  return c;
}

const RoundTally* find_round(const std::vector<RoundTally>& rounds, std::int32_t round) {
  for (const RoundTally& t : rounds)
    if (t.round == round) return &t;
  return nullptr;
}

bool ring_protocol(const std::string& p) {
  return p == "chang-roberts" || p == "dolev-klawe-rodeh" || p == "hirschberg-sinclair" ||
         p == "itai-rodeh";
}

// Messages one election costs under the protocol's worst input. Ring
// protocols get descending IDs (the token from every node survives longest);
// announce laps are excluded so the count is the election itself. The
// quantum protocol's cost is the round tally, which spans all channels.
std::uint64_t election_messages(const std::string& protocol, std::uint32_t n,
                                std::uint64_t seed) {
  ScenarioConfig cfg;
  cfg.name = "sweep";
  cfg.protocol = protocol;
  cfg.n = n;
  cfg.seed = seed;

  if (protocol == "quantum") {
    cfg.quantum.trigger_rounds = 1;
    cfg.decide_round = 1;
    const RunReport rep = run_scenario(cfg);
    const RoundTally* t = find_round(rep.rounds, 1);
    if (!t) throw Error(ErrorCode::internal_error, "sweep reelection did not complete");
    return t->total;
  }

  if (ring_protocol(protocol) && protocol != "itai-rodeh") {
    cfg.id_order = "given";
    cfg.ids.resize(n);
    for (std::uint32_t i = 0; i < n; ++i) cfg.ids[i] = n - 1 - i;
  }

  Trace trace;
  run_scenario(cfg, trace);
  if (protocol == "chang-roberts") return count_tags(trace, {"cr_token"});
  if (protocol == "dolev-klawe-rodeh") return count_tags(trace, {"dkr_one", "dkr_two"});
  if (protocol == "hirschberg-sinclair")
    return count_tags(trace, {"hs_probe", "hs_reply", "hs_leader"});
  if (protocol == "itai-rodeh") return count_tags(trace, {"ir_token"});
  if (protocol == "bully")
    return count_tags(trace, {"bully_election", "bully_answer", "coordinator"});
  throw Error(ErrorCode::config_error, "/protocol", "unknown protocol '" + protocol + "'");
}

void slope_band(const std::string& protocol, double& lo, double& hi) {
  const ClaimDefaults& d = claim_defaults();
  if (protocol == "quantum") {
    lo = d.quantum_slope_lo;
    hi = d.quantum_slope_hi;
  } else if (protocol == "chang-roberts" || protocol == "bully") {
    lo = d.ring_quadratic_lo;
    hi = d.ring_quadratic_hi;
  } else {
    lo = d.split_ring_slope_lo;
    hi = d.split_ring_slope_hi;
  }
}

} // namespace

SweepResult sweep_complexity(const std::vector<std::string>& protocols,
                             const std::vector<std::uint32_t>& sizes,
                             const std::vector<std::uint64_t>& seeds) {
  if (sizes.size() < 2)
    throw Error(ErrorCode::config_error, "/sizes", "slope fits need two or more sizes");
  if (seeds.empty()) throw Error(ErrorCode::config_error, "/seeds", "need at least one seed");

  SweepResult out;
  out.csv = "protocol,n,worst,mean\n";
  for (const std::string& protocol : protocols) {
    std::vector<double> xs, ys;
    for (const std::uint32_t n : sizes) {
      std::uint64_t worst = 0;
      double sum = 0;
      for (const std::uint64_t seed : seeds) {
        const std::uint64_t count = election_messages(protocol, n, seed);
        worst = std::max(worst, count);
        sum += double(count);
      }
      const double mean = sum / double(seeds.size());
      out.cells.push_back({protocol, n, worst, mean});
      out.csv += protocol;
      out.csv += ',';
      out.csv += std::to_string(n);
      out.csv += ',';
      out.csv += std::to_string(worst);
      out.csv += ',';
      out.csv += format_double(mean);
      out.csv += '\n';
      xs.push_back(double(n));
      ys.push_back(double(worst));
    }
    const double slope = fit_loglog_slope(xs, ys);
    double lo = 0, hi = 0;
    slope_band(protocol, lo, hi);
    out.verdicts.push_back({protocol + "-slope-lower", slope, lo, slope >= lo, ""});
    out.verdicts.push_back({protocol + "-slope-upper", slope, hi, slope <= hi, ""});
  }
  return out;
}

FairnessResult experiment_fairness(std::uint32_t n, std::uint64_t trials, std::uint64_t seed) {
  if (n < 2 || (n & (n - 1)) != 0)
    throw Error(ErrorCode::config_error, "/n",
                "winner distribution is uniform only when n is a power of 2");
  if (trials == 0) throw Error(ErrorCode::config_error, "/trials", "need at least one trial");
  if (trials > std::uint64_t(INT32_MAX))
    throw Error(ErrorCode::config_error, "/trials", "too many trials");
  const ClaimDefaults& d = claim_defaults();

  ScenarioConfig cfg;
  cfg.name = "fairness";
  cfg.protocol = "quantum";
  cfg.n = n;
  cfg.seed = seed;
  cfg.quantum.trigger_rounds = std::int32_t(trials);
  // reelections drive the run; heartbeats would only add noise to the trace
  cfg.quantum.heartbeat_every = 1'000'000'000;
  cfg.decide_round = std::int32_t(trials);
  cfg.event_limit = 1'000'000 + 100 * trials;

  Trace trace;
  run_scenario(cfg, trace);

  FairnessResult out;
  out.n = n;
  out.trials = trials;
  out.wins.assign(n, 0);

  // Round r's winner is the claimant whose share wave established round r.
  std::vector<bool> seen(trials + 1, false);
  for (const TraceRecord& rec : trace) {
    const auto* e = std::get_if<Envelope>(&rec);
    if (!e) continue;
    const auto* share = std::get_if<QShare>(&e->payload);
    if (!share) continue;
    const std::int32_t r = share->claim.round;
    if (r < 1 || std::uint64_t(r) > trials || seen[std::size_t(r)]) continue;
    seen[std::size_t(r)] = true;
    if (share->claim.claimant >= n)
      throw Error(ErrorCode::internal_error, "share wave without a claimant");
    out.wins[share->claim.claimant] += 1;
  }
  std::uint64_t total = 0;
  for (const std::uint64_t w : out.wins) total += w;
  if (total != trials) throw Error(ErrorCode::internal_error, "fairness run lost rounds");

  out.stat = chi_square_uniform_stat(out.wins);
  out.p_value = chi_square_survival(out.stat, int(n) - 1);
  out.underpowered = trials < d.fairness_min_trials_factor * n;

  out.verdict.name = "fairness-uniform";
  out.verdict.measured = out.p_value;
  out.verdict.bound = d.chi2_significance;
  if (out.underpowered) {
    out.verdict.pass = false;
    out.verdict.note = "underpowered: " + std::to_string(trials) + " trials < " +
                       std::to_string(d.fairness_min_trials_factor * n);
  } else {
    out.verdict.pass = out.p_value >= d.chi2_significance;
  }

  out.csv = "node,wins\n";
  for (std::uint32_t i = 0; i < n; ++i)
    out.csv += std::to_string(i) + "," + std::to_string(out.wins[i]) + "\n";
  return out;
}

StallResult experiment_flp_stall(std::uint32_t n, const std::string& target,
                                 std::uint64_t seed) {
  const char* tag = nullptr;
  if (target == "trigger")
    tag = "q_trigger";
  else if (target == "ack")
    tag = "q_ack";
  else if (target == "share")
    tag = "q_share";
  else
    throw Error(ErrorCode::config_error, "/target",
                "stall target must be trigger, ack, or share");
  const ClaimDefaults& d = claim_defaults();

  ScenarioConfig cfg;
  cfg.protocol = "quantum";
  cfg.n = n;
  cfg.seed = seed;
  cfg.delay = "asynchronous";
  cfg.max_delay = 20;
  // Slow heartbeats and a wide trigger gap keep the bootstrap clear of the
  // adversary's engagement time and the control run cheap.
  cfg.quantum.heartbeat_every = 50;
  cfg.quantum.trigger_gap = 300;
  cfg.quantum.trigger_rounds = 1;
  cfg.decide_round = 1;
  cfg.event_limit = d.flp_event_limit;
  cfg.collect_trace = false;

  ScenarioConfig stalled_cfg = cfg;
  stalled_cfg.name = target + "-stall";
  MessageMatcher m;
  m.tag = tag;
  m.after = 200;  // bootstrap settles first; the reelection finds the adversary
  stalled_cfg.stall = m;

  ScenarioConfig control_cfg = cfg;
  control_cfg.name = target + "-control";

  StallResult out;
  out.stalled = run_scenario(stalled_cfg);
  out.control = run_scenario(control_cfg);

  const bool postponed =
      !out.stalled.metrics.decision_step.has_value() && !out.stalled.metrics.terminated;
  out.verdicts.push_back({"flp-" + target + "-postponed",
                          double(out.stalled.metrics.wall_steps), double(d.flp_event_limit),
                          postponed, ""});

  const double decided_at = out.control.metrics.decision_step
                                ? double(*out.control.metrics.decision_step)
                                : double(d.flp_event_limit);
  out.verdicts.push_back({"flp-" + target + "-control", decided_at,
                          double(d.flp_elect_budget),
                          decided_at < double(d.flp_elect_budget), ""});
  return out;
}

FaultToleranceResult experiment_fault_tolerance(std::uint32_t n,
                                                const std::vector<std::uint32_t>& f_list,
                                                const std::vector<std::uint64_t>& seeds) {
  if (seeds.empty()) throw Error(ErrorCode::config_error, "/seeds", "need at least one seed");
  const ClaimDefaults& d = claim_defaults();

  FaultToleranceResult out;
  out.n = n;
  out.csv = "f,seed,messages,leader,agreed\n";

  for (const std::uint32_t f : f_list) {
    if (f >= n)
      throw Error(ErrorCode::config_error, "/f", "crash bound must leave a live node");
    const double bound = 3.0 * double(n - 1) + d.fault_constant * double(f + 1) * double(f + 1);
    std::uint64_t worst = 0;
    std::uint64_t agreed_runs = 0;

    for (const std::uint64_t seed : seeds) {
      ScenarioConfig cfg;
      cfg.name = "fault-f" + std::to_string(f);
      cfg.protocol = "quantum";
      cfg.n = n;
      cfg.seed = seed;
      cfg.quantum.f = f;
      cfg.quantum.window_always = true;
      cfg.quantum.trigger_rounds = 1;
      cfg.faults.f_max = f;
      cfg.faults.crash_on_measure = f;
      cfg.decide_round = 1;

      const RunReport rep = run_scenario(cfg);
      const RoundTally* t = find_round(rep.rounds, 1);
      FaultRow row;
      row.f = f;
      row.seed = seed;
      row.messages = t ? t->total : rep.metrics.messages_sent;  // no tally: count it all
      row.leader = rep.result.leader;
      row.agreed = rep.result.agreed;
      out.rows.push_back(row);

      worst = std::max(worst, row.messages);
      if (row.agreed) ++agreed_runs;
      out.csv += std::to_string(f) + "," + std::to_string(seed) + "," +
                 std::to_string(row.messages) + ",";
      if (row.leader) out.csv += std::to_string(*row.leader);
      out.csv += row.agreed ? ",true\n" : ",false\n";
    }

    out.verdicts.push_back({"fault-f" + std::to_string(f) + "-messages", double(worst), bound,
                            double(worst) <= bound, ""});
    out.verdicts.push_back({"fault-f" + std::to_string(f) + "-agreement", double(agreed_runs),
                            double(seeds.size()), agreed_runs == seeds.size(), ""});
  }
  return out;
}

} // namespace elab
