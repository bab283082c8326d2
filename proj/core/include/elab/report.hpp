#ifndef ELAB_REPORT_HPP
#define ELAB_REPORT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "elab/elections.hpp"
#include "elab/envelope.hpp"
#include "elab/metrics.hpp"

namespace elab {

// One named claim checked against a measured value. `note` flags results
// that carry a caveat instead of a clean pass/fail (e.g. too few trials).
struct Verdict {
  std::string name;
  double measured = 0;
  double bound = 0;
  bool pass = false;
  std::string note;
};

std::string verdict_line(const Verdict& v);

// Everything one simulation run produced, minus the raw trace.
struct RunReport {
  std::string name;
  std::string protocol;
  std::uint32_t n = 0;
  std::uint64_t seed = 0;
  RunMetrics metrics;
  std::uint32_t causal_time = 0;  // longest delivery chain in the whole run
  ElectionResult result;
  std::vector<RoundTally> rounds;
  std::vector<Verdict> verdicts;
};

// CSV emission is byte-stable: the same report always serializes to the
// same bytes, with no locale or float-formatting drift.
std::string report_csv_header();
std::string report_csv_row(const RunReport& r);

// One JSON object per line, keys in fixed order.
std::string trace_jsonl(const Trace& trace);

// Shortest round-trip decimal form of a double, locale-independent.
std::string format_double(double v);

} // namespace elab

#endif
