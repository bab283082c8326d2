// Command-line front end for the election lab: run one scenario, sweep
// message complexity against network size, or verify a set of claims.
// Exits 0 only when every verdict passes.
#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "elab/defaults.hpp"
#include "elab/error.hpp"
#include "elab/experiments.hpp"
#include "elab/report.hpp"
#include "elab/scenario.hpp"

using namespace elab;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::config_error, "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::config_error, "cannot write " + path);
  out << content;
}

void print_verdicts(const std::vector<Verdict>& verdicts, int& failures) {
  for (const Verdict& v : verdicts) {
    std::printf("  %s\n", verdict_line(v).c_str());
    if (!v.pass) ++failures;
  }
}

std::string verdict_csv(const std::vector<Verdict>& verdicts) {
  std::string out = "verdict,measured,bound,pass,note\n";
  for (const Verdict& v : verdicts) {
    out += v.name + "," + format_double(v.measured) + "," + format_double(v.bound) + "," +
           (v.pass ? "true" : "false") + "," + v.note + "\n";
  }
  return out;
}

int cmd_run(const std::string& config_path, std::optional<std::uint64_t> seed,
            std::optional<std::uint64_t> limit, const std::string& trace_out,
            const std::string& csv_out) {
  ScenarioConfig cfg = parse_scenario(read_file(config_path));
  if (seed) cfg.seed = *seed;
  if (limit) cfg.event_limit = *limit;
  if (!trace_out.empty()) cfg.collect_trace = true;

  Trace trace;
  const RunReport rep = cfg.collect_trace ? run_scenario(cfg, trace) : run_scenario(cfg);

  std::printf("%s: %s n=%u seed=%llu\n", rep.name.c_str(), rep.protocol.c_str(), rep.n,
              (unsigned long long)rep.seed);
  if (rep.result.agreed)
    std::printf("  leader %u (all live nodes agree)\n", *rep.result.leader);
  else
    std::printf("  no agreement\n");
  const char* ending = rep.metrics.terminated          ? "terminated"
                       : rep.metrics.decision_step ? "stopped on decision"
                                                   : "stopped at the event limit";
  std::printf("  %llu messages sent (%llu quantum), %llu steps, causal time %lld, %s\n",
              (unsigned long long)rep.metrics.messages_sent,
              (unsigned long long)rep.metrics.quantum_sent,
              (unsigned long long)rep.metrics.wall_steps, (long long)rep.metrics.time_complexity,
              ending);
  if (rep.metrics.decision_step)
    std::printf("  decided at step %lld\n", (long long)*rep.metrics.decision_step);
  for (const RoundTally& t : rep.rounds)
    std::printf("  round %d: %llu messages, causal time %u\n", t.round,
                (unsigned long long)t.total, t.causal_time);

  if (!csv_out.empty()) write_file(csv_out, report_csv_header() + report_csv_row(rep));
  if (!trace_out.empty()) write_file(trace_out, trace_jsonl(trace));
  return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& csv_out) {
  const nlohmann::json j = nlohmann::json::parse(read_file(config_path));
  std::vector<std::string> protocols;
  std::vector<std::uint32_t> sizes;
  std::vector<std::uint64_t> seeds;
  for (const auto& [key, val] : j.items()) {
    if (key == "protocols")
      for (const auto& p : val) protocols.push_back(p.get<std::string>());
    else if (key == "sizes")
      for (const auto& n : val) sizes.push_back(n.get<std::uint32_t>());
    else if (key == "seeds")
      for (const auto& s : val) seeds.push_back(s.get<std::uint64_t>());
    else
      throw Error(ErrorCode::config_error, "/" + key, "unknown key");
  }

  const SweepResult res = sweep_complexity(protocols, sizes, seeds);
  std::printf("worst-case election messages by size:\n");
  for (const SweepCell& c : res.cells)
    std::printf("  %-22s n=%-4u worst %-8llu mean %s\n", c.protocol.c_str(), c.n,
                (unsigned long long)c.worst, format_double(c.mean).c_str());
  int failures = 0;
  print_verdicts(res.verdicts, failures);
  if (!csv_out.empty()) write_file(csv_out, res.csv);
  return failures == 0 ? 0 : 1;
}

int cmd_verify(const std::string& config_path, const std::string& csv_out) {
  const nlohmann::json j = nlohmann::json::parse(read_file(config_path));
  int failures = 0;
  std::vector<Verdict> all;

  for (const auto& [key, val] : j.items()) {
    if (key == "tally") {
      // exact reelection cost: 3(n-1) messages and causal time 3, per round
      const std::int32_t rounds = val.value("rounds", 3);
      const std::uint64_t seed = val.value("seed", 11);
      std::printf("tally: exact reelection cost\n");
      for (const auto& size : val.at("sizes")) {
        const std::uint32_t n = size.get<std::uint32_t>();
        ScenarioConfig cfg;
        cfg.name = "tally-n" + std::to_string(n);
        cfg.protocol = "quantum";
        cfg.n = n;
        cfg.seed = seed;
        cfg.quantum.trigger_rounds = rounds;
        cfg.decide_round = rounds;
        const RunReport rep = run_scenario(cfg);
        bool exact = rep.result.agreed && std::int32_t(rep.rounds.size()) > rounds;
        std::uint64_t worst = 0;
        std::uint32_t causal = 0;
        for (const RoundTally& t : rep.rounds) {
          if (t.round < 1) continue;
          worst = std::max(worst, t.total);
          causal = std::max(causal, t.causal_time);
          if (t.total != 3 * std::uint64_t(n - 1) || t.causal_time != 3) exact = false;
        }
        std::vector<Verdict> v{
            {"tally-n" + std::to_string(n), double(worst), 3.0 * (n - 1), exact, ""},
            {"causal-n" + std::to_string(n), double(causal), 3.0, exact, ""}};
        print_verdicts(v, failures);
        all.insert(all.end(), v.begin(), v.end());
      }
    } else if (key == "sweep") {
      std::vector<std::string> protocols;
      std::vector<std::uint32_t> sizes;
      std::vector<std::uint64_t> seeds;
      for (const auto& p : val.at("protocols")) protocols.push_back(p.get<std::string>());
      for (const auto& n : val.at("sizes")) sizes.push_back(n.get<std::uint32_t>());
      for (const auto& s : val.at("seeds")) seeds.push_back(s.get<std::uint64_t>());
      std::printf("sweep: complexity slopes\n");
      const SweepResult res = sweep_complexity(protocols, sizes, seeds);
      print_verdicts(res.verdicts, failures);
      all.insert(all.end(), res.verdicts.begin(), res.verdicts.end());
    } else if (key == "fairness") {
      std::printf("fairness: winner distribution\n");
      const FairnessResult res = experiment_fairness(val.at("n").get<std::uint32_t>(),
                                                     val.at("trials").get<std::uint64_t>(),
                                                     val.value("seed", 1));
      std::vector<Verdict> v{res.verdict};
      print_verdicts(v, failures);
      all.push_back(res.verdict);
    } else if (key == "flp") {
      const std::uint32_t n = val.at("n").get<std::uint32_t>();
      const std::uint64_t seed = val.value("seed", 3);
      std::printf("flp: indefinite postponement\n");
      for (const auto& target : val.at("targets")) {
        const StallResult res = experiment_flp_stall(n, target.get<std::string>(), seed);
        print_verdicts(res.verdicts, failures);
        all.insert(all.end(), res.verdicts.begin(), res.verdicts.end());
      }
    } else if (key == "fault_tolerance") {
      const std::uint32_t n = val.at("n").get<std::uint32_t>();
      std::vector<std::uint32_t> f_list;
      for (const auto& f : val.at("f")) f_list.push_back(f.get<std::uint32_t>());
      std::vector<std::uint64_t> seeds(val.value("seeds", 100));
      std::iota(seeds.begin(), seeds.end(), 1);
      std::printf("fault tolerance: crash of the measured winner\n");
      const FaultToleranceResult res = experiment_fault_tolerance(n, f_list, seeds);
      print_verdicts(res.verdicts, failures);
      all.insert(all.end(), res.verdicts.begin(), res.verdicts.end());
    } else {
      throw Error(ErrorCode::config_error, "/" + key, "unknown claim");
    }
  }

  std::printf("%zu verdicts, %d failed\n", all.size(), failures);
  if (!csv_out.empty()) write_file(csv_out, verdict_csv(all));
  return failures == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"deterministic election lab"};
  app.require_subcommand(1);

  std::string config_path, trace_out, csv_out;
  std::optional<std::uint64_t> seed, limit;

  CLI::App* run = app.add_subcommand("run", "run one scenario config");
  run->add_option("config", config_path, "scenario JSON")->required();
  run->add_option("--seed", seed, "override the scenario seed");
  run->add_option("--limit", limit, "override the event limit");
  run->add_option("--trace-out", trace_out, "write the trace as JSONL");
  run->add_option("--csv-out", csv_out, "write the run report as CSV");

  CLI::App* sweep = app.add_subcommand("sweep", "sweep election cost against size");
  sweep->add_option("config", config_path, "sweep JSON: protocols, sizes, seeds")->required();
  sweep->add_option("--csv-out", csv_out, "write the sweep table as CSV");

  CLI::App* verify = app.add_subcommand("verify", "check a set of claims");
  verify->add_option("config", config_path, "claims JSON")->required();
  verify->add_option("--csv-out", csv_out, "write all verdicts as CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, seed, limit, trace_out, csv_out);
    if (sweep->parsed()) return cmd_sweep(config_path, csv_out);
    return cmd_verify(config_path, csv_out);
  } catch (const Error& e) {
    if (!e.pointer().empty())
      std::fprintf(stderr, "config error at %s: %s\n", e.pointer().c_str(), e.what());
    else
      std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  }
}
