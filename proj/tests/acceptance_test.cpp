// Checks the lab's nine headline claims end to end and prints one line per
// claim. Exit status is the number of failed claims. Every tolerance comes
// from claim_defaults() or is an exact equality.
#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "elab/defaults.hpp"
#include "elab/elections.hpp"
#include "elab/engine.hpp"
#include "elab/experiments.hpp"
#include "elab/metrics.hpp"
#include "elab/report.hpp"
#include "elab/scenario.hpp"
#include "oracles/oracles.hpp"

using namespace elab;

namespace {

struct Criterion {
  int id = 0;
  bool pass = true;
  std::string detail;
};

void note(Criterion& c, const std::string& msg) {
  c.pass = false;
  if (!c.detail.empty()) c.detail += "; ";
  c.detail += msg;
}

const RoundTally* find_round(const std::vector<RoundTally>& rounds, std::int32_t round) {
  for (const RoundTally& t : rounds)
    if (t.round == round) return &t;
  return nullptr;
}

// Coherent shares of one state must read the same digit at every party.
std::uint64_t snap_violations(const Trace& trace) {
  std::map<std::uint64_t, std::int32_t> first_digit;
  std::uint64_t bad = 0;
  for (const TraceRecord& rec : trace) {
    const auto* q = std::get_if<QuantumEvent>(&rec);
    if (!q || q->kind != QuantumEventKind::measured || q->decohered) continue;
    auto [it, fresh] = first_digit.try_emplace(q->state_id, q->digit);
    if (!fresh && it->second != q->digit) ++bad;
  }
  return bad;
}

std::uint32_t ceil_log2(std::uint32_t n) {
  std::uint32_t b = 0;
  while ((1u << b) < n) ++b;
  return b;
}

std::int32_t lottery_phases(const Trace& trace) {
  std::int32_t max_phase = 0;
  for (const TraceRecord& rec : trace) {
    const Envelope* e = std::get_if<Envelope>(&rec);
    if (!e) continue;
    if (const auto* tok = std::get_if<IrToken>(&e->payload))
      max_phase = std::max(max_phase, tok->phase);
  }
  return max_phase + 1;
}

ScenarioConfig reelection_config(std::uint32_t n, std::int32_t rounds, std::uint64_t seed) {
  ScenarioConfig cfg;
  cfg.name = "reelection-n" + std::to_string(n);
  cfg.protocol = "quantum";
  cfg.n = n;
  cfg.seed = seed;
  cfg.quantum.trigger_rounds = rounds;
  cfg.decide_round = rounds;
  return cfg;
}

ScenarioConfig crash_window_config(std::uint32_t n, std::uint32_t f, std::uint64_t seed) {
  ScenarioConfig cfg;
  cfg.name = "crash-window-f" + std::to_string(f);
  cfg.protocol = "quantum";
  cfg.n = n;
  cfg.seed = seed;
  cfg.quantum.f = f;
  cfg.quantum.window_always = true;
  cfg.quantum.trigger_rounds = 1;
  cfg.faults.f_max = f;
  cfg.faults.crash_on_measure = f;
  cfg.decide_round = 1;
  return cfg;
}

std::string fmt(double v) { return format_double(v); }

} // namespace

int main() {
  const ClaimDefaults& defaults = claim_defaults();
  std::vector<Criterion> results;

  // ---- criteria 1 + 2: exact reelection tally and causal time ----
  // (their traces also feed the snap-consistency count of criterion 5)
  Criterion c1{1};
  Criterion c2{2};
  std::uint64_t snap_bad = 0;
  std::uint64_t snap_states = 0;
  for (const std::uint32_t n : {4u, 8u, 16u, 32u, 64u}) {
    auto eng = build_scenario(reelection_config(n, 3, 11));
    eng->run();
    if (!election_result(*eng).agreed) note(c1, "n=" + std::to_string(n) + " did not agree");
    const std::vector<RoundTally> rounds = election_round_tallies(eng->trace());
    for (std::int32_t r = 1; r <= 3; ++r) {
      const RoundTally* t = find_round(rounds, r);
      if (!t) {
        note(c1, "n=" + std::to_string(n) + " round " + std::to_string(r) + " missing");
        continue;
      }
      const std::uint64_t want = n - 1;
      if (t->triggers != want || t->acks != want || t->shares != want ||
          t->total != 3 * want)
        note(c1, "n=" + std::to_string(n) + " round " + std::to_string(r) + " used " +
                     std::to_string(t->total) + " messages, want " + std::to_string(3 * want));
      if (t->causal_time != 3)
        note(c2, "n=" + std::to_string(n) + " round " + std::to_string(r) +
                     " causal time " + std::to_string(t->causal_time));
    }
    snap_bad += snap_violations(eng->trace());
    for (const TraceRecord& rec : eng->trace())
      if (const auto* q = std::get_if<QuantumEvent>(&rec))
        if (q->kind == QuantumEventKind::prepared) ++snap_states;
  }
  if (c1.pass) c1.detail = "every reelection at n in {4..64} used exactly 3(n-1) messages";
  if (c2.pass) c2.detail = "every reelection round ran in causal time exactly 3";
  results.push_back(c1);
  results.push_back(c2);

  // ---- criterion 3: complexity separation ----
  Criterion c3{3};
  {
    const std::vector<std::uint32_t> sizes{8, 16, 32, 64};
    const std::vector<std::uint64_t> seeds{1, 2, 3};
    SweepResult sw = sweep_complexity({"quantum", "chang-roberts", "bully"}, sizes, seeds);
    for (std::size_t i = 0; i + 1 < sw.verdicts.size(); i += 2) {
      const Verdict& lo = sw.verdicts[i];
      const Verdict& hi = sw.verdicts[i + 1];
      const std::string name = lo.name.substr(0, lo.name.size() - sizeof("-slope-lower") + 1);
      const std::string band = "[" + fmt(lo.bound) + ", " + fmt(hi.bound) + "]";
      if (!lo.pass || !hi.pass)
        note(c3, name + " slope " + fmt(lo.measured) + " outside " + band);
      else
        c3.detail += (c3.detail.empty() ? "" : "; ") + name + " slope " + fmt(lo.measured) +
                     " in " + band;
    }
    // criterion 5 wants the quantum sweep traces checked too
    for (const std::uint32_t n : sizes)
      for (const std::uint64_t seed : seeds) {
        auto eng = build_scenario(reelection_config(n, 1, seed));
        eng->run();
        snap_bad += snap_violations(eng->trace());
        for (const TraceRecord& rec : eng->trace())
          if (const auto* q = std::get_if<QuantumEvent>(&rec))
            if (q->kind == QuantumEventKind::prepared) ++snap_states;
      }
  }
  results.push_back(c3);

  // ---- criterion 4: crash recovery within the quadratic budget ----
  Criterion c4{4};
  {
    // the budget's constant must be the one fitted from the takeover oracle
    double fitted = 0;
    for (const std::size_t w : {2u, 3u, 5u})
      fitted = std::max(fitted, double(oracle::bully_window_worst(w, 32)) / double(w * w));
    if (fitted != defaults.fault_constant)
      note(c4, "constant " + fmt(defaults.fault_constant) + " drifted from oracle fit " +
                   fmt(fitted));

    std::vector<std::uint64_t> seeds(100);
    std::iota(seeds.begin(), seeds.end(), 1);
    FaultToleranceResult ft = experiment_fault_tolerance(32, {1, 2, 4}, seeds);
    for (const Verdict& v : ft.verdicts)
      if (!v.pass)
        note(c4, v.name + " measured " + fmt(v.measured) + " vs " + fmt(v.bound));
    if (c4.pass) {
      double worst = 0;
      for (const FaultRow& row : ft.rows) worst = std::max(worst, double(row.messages));
      c4.detail = "300 crash recoveries stayed within 3(n-1) + " + fmt(defaults.fault_constant) +
                  "(f+1)^2, worst " + fmt(worst) + ", leaders all live";
    }

    // replay the same scenarios for the criterion 5 snap count
    for (const std::uint32_t f : {1u, 2u, 4u})
      for (const std::uint64_t seed : seeds) {
        auto eng = build_scenario(crash_window_config(32, f, seed));
        eng->run();
        snap_bad += snap_violations(eng->trace());
        for (const TraceRecord& rec : eng->trace())
          if (const auto* q = std::get_if<QuantumEvent>(&rec))
            if (q->kind == QuantumEventKind::prepared) ++snap_states;
      }
  }
  results.push_back(c4);

  // ---- criterion 5: snap consistency across all the above traces ----
  Criterion c5{5};
  if (snap_bad != 0)
    note(c5, std::to_string(snap_bad) + " conflicting digits");
  else
    c5.detail = "0 conflicting digits across " + std::to_string(snap_states) +
                " entangled states from criteria 1-4";
  results.push_back(c5);

  // ---- criterion 6: winner fairness ----
  Criterion c6{6};
  {
    FairnessResult fair = experiment_fairness(8, 10000, 1);
    if (fair.underpowered)
      note(c6, "underpowered");
    else if (!fair.verdict.pass)
      note(c6, "p " + fmt(fair.p_value) + " < " + fmt(fair.verdict.bound));
    else
      c6.detail = "10000 winners, chi-square p " + fmt(fair.p_value) + " >= " +
                  fmt(fair.verdict.bound);
  }
  results.push_back(c6);

  // ---- criterion 7: stalling triggers or shares postpones forever ----
  Criterion c7{7};
  for (const char* target : {"trigger", "share"}) {
    StallResult stall = experiment_flp_stall(8, target, 3);
    for (const Verdict& v : stall.verdicts)
      if (!v.pass) note(c7, v.name + " measured " + fmt(v.measured));
    if (c7.pass)
      c7.detail += std::string(c7.detail.empty() ? "" : "; ") + target + " stalled " +
                   fmt(double(stall.stalled.metrics.wall_steps)) + " events, control decided at " +
                   fmt(double(*stall.control.metrics.decision_step));
  }
  results.push_back(c7);

  // ---- criterion 8: classical protocol correctness ----
  Criterion c8{8};
  {
    const char* ring_protocols[] = {"chang-roberts", "dolev-klawe-rodeh", "hirschberg-sinclair"};
    std::uint64_t ring_runs = 0;
    std::uint64_t split_ring_worst = 0;

    // every id permutation, n <= 7
    for (std::uint32_t n = 2; n <= 7 && c8.pass; ++n) {
      std::vector<NodeId> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      const double hs_bound =
          defaults.split_ring_bound_factor * n * (ceil_log2(n) + 1);
      do {
        for (const char* protocol : ring_protocols) {
          ScenarioConfig cfg;
          cfg.protocol = protocol;
          cfg.n = n;
          cfg.id_order = "given";
          cfg.ids = perm;
          cfg.seed = 5;
          cfg.collect_trace = false;
          RunReport rep = run_scenario(cfg);
          ++ring_runs;
          if (!rep.result.agreed || *rep.result.leader != n - 1) {
            note(c8, std::string(protocol) + " missed the max id on a permutation at n=" +
                         std::to_string(n));
            break;
          }
          if (protocol == std::string("hirschberg-sinclair")) {
            split_ring_worst = std::max(split_ring_worst, rep.metrics.messages_sent);
            if (double(rep.metrics.messages_sent) > hs_bound) {
              note(c8, "split-ring run used " + std::to_string(rep.metrics.messages_sent) +
                           " messages, bound " + fmt(hs_bound));
              break;
            }
          }
        }
      } while (std::next_permutation(perm.begin(), perm.end()) && c8.pass);
    }

    // every crash subset of the clique takeover, n <= 7
    for (std::uint32_t n = 2; n <= 7 && c8.pass; ++n) {
      for (std::uint32_t mask = 0; mask + 1 < (1u << n); ++mask) {
        ScenarioConfig cfg;
        cfg.protocol = "bully";
        cfg.n = n;
        cfg.seed = 5;
        cfg.collect_trace = false;
        NodeId expected = 0;
        for (std::uint32_t i = 0; i < n; ++i) {
          if (mask & (1u << i))
            cfg.faults.crashes.push_back({i, 0});
          else
            expected = i;
        }
        cfg.faults.f_max = std::uint32_t(cfg.faults.crashes.size());
        RunReport rep = run_scenario(cfg);
        if (!rep.result.agreed || *rep.result.leader != expected) {
          note(c8, "takeover missed the max alive id, n=" + std::to_string(n) + " mask " +
                       std::to_string(mask));
          break;
        }
      }
    }

    // 1000 random seeds at n = 32
    for (std::uint64_t seed = 1; seed <= 1000 && c8.pass; ++seed) {
      for (const char* protocol : ring_protocols) {
        ScenarioConfig cfg;
        cfg.protocol = protocol;
        cfg.n = 32;
        cfg.id_order = "random";
        cfg.id_seed = seed;
        cfg.seed = seed;
        cfg.collect_trace = false;
        RunReport rep = run_scenario(cfg);
        ++ring_runs;
        if (!rep.result.agreed || *rep.result.leader != 31) {
          note(c8, std::string(protocol) + " missed id 31 at seed " + std::to_string(seed));
          break;
        }
        if (protocol == std::string("hirschberg-sinclair")) {
          split_ring_worst = std::max(split_ring_worst, rep.metrics.messages_sent);
          if (double(rep.metrics.messages_sent) >
              defaults.split_ring_bound_factor * 32 * (ceil_log2(32) + 1)) {
            note(c8, "split-ring bound broken at seed " + std::to_string(seed));
            break;
          }
        }
      }
      // the takeover, against a seed-derived crash set
      ScenarioConfig cfg;
      cfg.protocol = "bully";
      cfg.n = 32;
      cfg.seed = seed;
      cfg.collect_trace = false;
      std::set<NodeId> crashed;
      std::uint64_t x = seed;
      for (std::uint64_t i = 0; i < seed % 4; ++i) {
        x = x * 6364136223846793005ULL + 1442695040888963407ULL;
        crashed.insert(NodeId((x >> 33) % 32));
      }
      NodeId expected = 0;
      for (NodeId i = 0; i < 32; ++i)
        if (!crashed.count(i)) expected = i;
      for (NodeId c : crashed) cfg.faults.crashes.push_back({c, 0});
      cfg.faults.f_max = std::uint32_t(crashed.size());
      RunReport rep = run_scenario(cfg);
      if (!rep.result.agreed || *rep.result.leader != expected)
        note(c8, "takeover missed the max alive id at seed " + std::to_string(seed));
    }

    // the anonymous lottery: one leader, phases near the model
    for (const std::uint32_t n : {3u, 4u, 8u}) {
      if (!c8.pass) break;
      const double model = oracle::itai_rodeh_phase_oracle(n, 200000, 99);
      std::uint64_t total_phases = 0;
      for (std::uint64_t seed = 1; seed <= 10000; ++seed) {
        ScenarioConfig cfg;
        cfg.protocol = "itai-rodeh";
        cfg.n = n;
        cfg.anonymous = true;
        cfg.seed = seed;
        auto eng = build_scenario(cfg);
        eng->run();
        if (!election_result(*eng).agreed) {
          note(c8, "lottery failed to elect at n=" + std::to_string(n) + " seed " +
                       std::to_string(seed));
          break;
        }
        total_phases += std::uint64_t(lottery_phases(eng->trace()));
      }
      if (!c8.pass) break;
      const double mean = double(total_phases) / 10000.0;
      if (mean < model - defaults.ir_phase_tolerance || mean > model + defaults.ir_phase_tolerance) {
        note(c8, "lottery phases " + fmt(mean) + " vs model " + fmt(model) + " at n=" +
                     std::to_string(n));
      }
    }

    if (c8.pass)
      c8.detail = std::to_string(ring_runs) +
                  " ring elections plus every takeover crash subset picked the max alive id; "
                  "split-ring worst " +
                  std::to_string(split_ring_worst) + " messages; lottery phases match the model";
  }
  results.push_back(c8);

  // ---- criterion 9: byte-identical reruns ----
  Criterion c9{9};
  {
    const ScenarioConfig rerun_a = reelection_config(8, 3, 11);
    const ScenarioConfig rerun_b = crash_window_config(32, 2, 42);
    for (const ScenarioConfig& cfg : {rerun_a, rerun_b}) {
      Trace t1, t2;
      const std::string r1 = report_csv_row(run_scenario(cfg, t1));
      const std::string r2 = report_csv_row(run_scenario(cfg, t2));
      if (r1 != r2) note(c9, cfg.name + " csv differed");
      if (trace_jsonl(t1) != trace_jsonl(t2)) note(c9, cfg.name + " jsonl differed");
    }
    const SweepResult s1 = sweep_complexity({"chang-roberts"}, {8, 16}, {1});
    const SweepResult s2 = sweep_complexity({"chang-roberts"}, {8, 16}, {1});
    if (s1.csv != s2.csv) note(c9, "sweep csv differed");
    if (c9.pass) c9.detail = "reruns byte-identical for reports, traces, and sweep tables";
  }
  results.push_back(c9);

  int failures = 0;
  for (const Criterion& c : results) {
    if (!c.pass) ++failures;
    std::printf("%s criterion %d: %s\n", c.pass ? "PASS" : "FAIL", c.id, c.detail.c_str());
  }
  std::printf("%d/%d criteria passed\n", int(results.size()) - failures, int(results.size()));
  return failures;
}
