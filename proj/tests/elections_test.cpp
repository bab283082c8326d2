#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>
#include <string>

#include "elab/elections.hpp"
#include "elab/error.hpp"
#include "elab/metrics.hpp"
#include "oracles/oracles.hpp"
#include "support.hpp"

using namespace elab;
using namespace elab::testing;

namespace {

std::uint64_t count_tags(const Trace& trace, std::initializer_list<const char*> tags) {
  std::uint64_t count = 0;
  for (const TraceRecord& rec : trace) {
    const Envelope* e = std::get_if<Envelope>(&rec);
    if (!e) continue;
    for (const char* t : tags)
      if (std::string(payload_tag(e->payload)) == t) ++count;
  }
  return count;
}

struct RingRun {
  ElectionResult result;
  std::uint64_t election = 0;
  std::uint64_t announce = 0;
  std::uint32_t causal = 0;
  RunMetrics metrics;
  Trace trace;
};

RingRun run_ring(void (*install)(EventEngine&), Topology topo, std::int64_t delta,
                 std::uint64_t seed, std::initializer_list<const char*> election_tags,
                 std::initializer_list<const char*> announce_tags) {
  EngineOptions opts;
  opts.seed = seed;
  EventEngine eng(std::move(topo), SynchronousDelay{delta}, FaultPlan{}, opts);
  install(eng);
  eng.run();
  RingRun out;
  out.result = election_result(eng);
  out.election = count_tags(eng.trace(), election_tags);
  out.announce = count_tags(eng.trace(), announce_tags);
  out.causal = elapsed_causal_time(eng.trace());
  out.metrics = eng.metrics();
  out.trace = eng.trace();
  return out;
}

} // namespace

// ---- circulating-token protocol (highest ID swallows) ----

TEST_CASE("unit-test token ring election small ring matches oracle") {
  Topology topo = build_ring(4);
  auto oracle = oracle::chang_roberts_oracle(topo.ring_order());
  RingRun run = run_ring(install_chang_roberts, std::move(topo), 1, 7, {"cr_token"}, {"cr_leader"});
  CHECK(run.result.agreed);
  CHECK(*run.result.leader == 3);
  CHECK(oracle.leader == 3);
  CHECK(run.election == oracle.election_messages);
  CHECK(run.announce == oracle.announce_messages);
  CHECK(run.election + run.announce == oracle.total_messages);
  CHECK(run.causal == oracle.causal_time);
  CHECK(run.causal == 8);  // token lap plus announcement lap on four nodes
  CHECK(run.metrics.terminated);
}

TEST_CASE("unit-test token ring worst and best arrangements") {
  // descending IDs along the ring maximize token travel: n(n+1)/2
  std::vector<NodeId> desc{7, 6, 5, 4, 3, 2, 1, 0};
  auto worst = oracle::chang_roberts_oracle(desc);
  CHECK(worst.election_messages == 36);  // 8*9/2
  CHECK(worst.announce_messages == 8);
  RingRun worst_run = run_ring(install_chang_roberts,
                               build_ring(8, RingDirection::uni, IdOrder::given, 0, desc), 1, 3,
                               {"cr_token"}, {"cr_leader"});
  CHECK(worst_run.election == 36);
  CHECK(worst_run.announce == 8);
  CHECK(*worst_run.result.leader == 7);

  // ascending IDs minimize: every loser dies in one hop, winner laps
  std::vector<NodeId> asc{0, 1, 2, 3, 4, 5, 6, 7};
  auto best = oracle::chang_roberts_oracle(asc);
  CHECK(best.election_messages == 15);  // (n-1) + n
  RingRun best_run = run_ring(install_chang_roberts,
                              build_ring(8, RingDirection::uni, IdOrder::given, 0, asc), 1, 3,
                              {"cr_token"}, {"cr_leader"});
  CHECK(best_run.election == 15);
}

TEST_CASE("unit-test token ring exhaustive permutations match oracle") {
  std::vector<NodeId> ids{0, 1, 2, 3, 4};
  std::sort(ids.begin(), ids.end());
  do {
    auto expect = oracle::chang_roberts_oracle(ids);
    RingRun run = run_ring(install_chang_roberts,
                           build_ring(5, RingDirection::uni, IdOrder::given, 0, ids), 1, 11,
                           {"cr_token"}, {"cr_leader"});
    REQUIRE(run.result.agreed);
    CHECK(*run.result.leader == expect.leader);
    CHECK(run.election == expect.election_messages);
    CHECK(run.announce == expect.announce_messages);
    CHECK(run.causal == expect.causal_time);
  } while (std::next_permutation(ids.begin(), ids.end()));
}

TEST_CASE("unit-test token ring counts are delay independent") {
  // swallowing depends on values only, so jittered delays change timing but
  // neither the counts nor the causal chain
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    Topology topo = build_ring(9, RingDirection::uni, IdOrder::random, seed);
    auto expect = oracle::chang_roberts_oracle(topo.ring_order());
    RingRun run = run_ring(install_chang_roberts, std::move(topo), 7, seed * 100 + 1,
                           {"cr_token"}, {"cr_leader"});
    CHECK(run.result.agreed);
    CHECK(*run.result.leader == 8);
    CHECK(run.election == expect.election_messages);
    CHECK(run.announce == 9);
    CHECK(run.causal == 18);
  }
}

// ---- value-duel ring protocol ----

TEST_CASE("unit-test value duel elects the maximum with bounded messages") {
  for (std::size_t n : {2u, 3u, 5u, 8u, 16u, 33u}) {
    for (std::uint64_t seed : {4ULL, 9ULL}) {
      Topology topo = build_ring(n, RingDirection::uni, IdOrder::random, seed);
      RingRun run = run_ring(install_dkr, std::move(topo), 3, seed, {"dkr_one", "dkr_two"},
                             {"dkr_leader"});
      REQUIRE(run.result.agreed);
      CHECK(*run.result.leader == n - 1);
      CHECK(run.announce == n);
      std::uint64_t phases = 1;
      std::size_t pow = 1;
      while (pow < n) { pow *= 2; ++phases; }  // floor(log2 n) + 1
      CHECK(run.election <= 2 * n * phases);
      CHECK(run.metrics.terminated);
    }
  }
}

TEST_CASE("unit-test value duel replays deterministically") {
  auto once = [](std::uint64_t seed) {
    Topology topo = build_ring(12, RingDirection::uni, IdOrder::random, 5);
    RingRun run = run_ring(install_dkr, std::move(topo), 4, seed, {"dkr_one", "dkr_two"},
                           {"dkr_leader"});
    return run.metrics.messages_sent;
  };
  CHECK(once(77) == once(77));
}

// ---- doubling-probe protocol ----

TEST_CASE("unit-test doubling probes elect the maximum within the bound") {
  for (std::size_t n : {2u, 3u, 4u, 8u, 17u, 32u}) {
    for (std::uint64_t seed : {1ULL, 6ULL}) {
      Topology topo = build_ring(n, RingDirection::bi, IdOrder::random, seed + n);
      RingRun run = run_ring(install_hs, std::move(topo), 3, seed, {"hs_probe", "hs_reply"},
                             {"hs_leader"});
      REQUIRE(run.result.agreed);
      CHECK(*run.result.leader == n - 1);
      CHECK(run.announce == n);
      std::uint64_t phases = 1;  // ceil(log2 n) + 1
      std::size_t pow = 1;
      while (pow < n) { pow *= 2; ++phases; }
      CHECK(run.election <= 8 * n * phases);
      CHECK(run.metrics.terminated);
    }
  }
}

// ---- anonymous lottery protocol ----

namespace {
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
} // namespace

TEST_CASE("unit-test anonymous lottery always ends with exactly one leader") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    std::int64_t delta = 1 + static_cast<std::int64_t>(seed % 3);  // jitter included
    EngineOptions opts;
    opts.seed = seed;
    EventEngine eng(build_ring(8, RingDirection::uni, IdOrder::sorted, 0, {}, true),
                    SynchronousDelay{delta}, FaultPlan{}, opts);
    install_itai_rodeh(eng);
    eng.run();
    ElectionResult r = election_result(eng);
    REQUIRE(r.agreed);
    int self_believers = 0;
    for (NodeId i = 0; i < 8; ++i)
      if (r.beliefs[i] && *r.beliefs[i] == i) ++self_believers;
    CHECK(self_believers == 1);
    CHECK(eng.metrics().terminated);
  }
}

TEST_CASE("unit-test anonymous lottery phase count tracks the drawing process") {
  const std::size_t n = 8;
  const int runs = 400;
  double total_phases = 0;
  for (int i = 0; i < runs; ++i) {
    EngineOptions opts;
    opts.seed = 1000 + static_cast<std::uint64_t>(i);
    EventEngine eng(build_ring(n, RingDirection::uni, IdOrder::sorted, 0, {}, true),
                    SynchronousDelay{1}, FaultPlan{}, opts);
    install_itai_rodeh(eng);
    eng.run();
    total_phases += lottery_phases(eng.trace());
  }
  double sim_mean = total_phases / runs;
  double oracle_mean = oracle::itai_rodeh_phase_oracle(n, 200000, 99);
  INFO("sim ", sim_mean, " oracle ", oracle_mean);
  CHECK(sim_mean == doctest::Approx(oracle_mean).epsilon(0.15));
}

// ---- takeover protocol ----

namespace {
struct BullyRun {
  ElectionResult result;
  std::uint64_t elections = 0;
  std::uint64_t answers = 0;
  std::uint64_t coordinators = 0;
  RunMetrics metrics;
};

BullyRun run_bully(std::size_t n, const std::set<NodeId>& crashed, std::int64_t delta,
                   std::uint64_t seed) {
  FaultPlan faults;
  faults.f_max = static_cast<std::uint32_t>(crashed.size());
  for (NodeId c : crashed) faults.crashes.push_back(CrashFault{c, 0});
  EngineOptions opts;
  opts.seed = seed;
  EventEngine eng(build_clique(n), SynchronousDelay{delta}, faults, opts);
  install_bully(eng);
  eng.run();
  BullyRun out;
  out.result = election_result(eng);
  out.elections = count_tags(eng.trace(), {"bully_election"});
  out.answers = count_tags(eng.trace(), {"bully_answer"});
  out.coordinators = count_tags(eng.trace(), {"coordinator"});
  out.metrics = eng.metrics();
  return out;
}
} // namespace

TEST_CASE("unit-test takeover fault-free matches oracle closure") {
  std::set<NodeId> all{0, 1, 2, 3, 4};
  auto expect = oracle::bully_oracle(5, all, {});
  CHECK(expect.total_messages == 24);  // n^2 - 1
  CHECK(expect.leader == 4);
  for (std::int64_t delta : {1, 3}) {
    BullyRun run = run_bully(5, {}, delta, 17);
    REQUIRE(run.result.agreed);
    CHECK(*run.result.leader == 4);
    CHECK(run.elections == expect.election_messages);
    CHECK(run.answers == expect.answer_messages);
    CHECK(run.coordinators == expect.coordinator_messages);
  }
}

TEST_CASE("unit-test takeover with the top node crashed elects the next") {
  auto expect = oracle::bully_oracle(5, {0, 1, 2, 3}, {4});
  CHECK(expect.leader == 3);
  CHECK(expect.election_messages == 10);
  CHECK(expect.answer_messages == 6);
  CHECK(expect.coordinator_messages == 4);
  BullyRun run = run_bully(5, {4}, 2, 23);
  REQUIRE(run.result.agreed);
  CHECK(*run.result.leader == 3);
  CHECK(run.elections == 10);
  CHECK(run.answers == 6);
  CHECK(run.coordinators == 4);
  CHECK(run.metrics.dead_deliveries > 0);  // challenges to the dead node
}

TEST_CASE("unit-test takeover with several crashes still agrees") {
  for (std::uint64_t seed : {3ULL, 8ULL, 21ULL}) {
    BullyRun run = run_bully(6, {5, 3}, 2, seed);
    REQUIRE(run.result.agreed);
    CHECK(*run.result.leader == 4);
  }
}

TEST_CASE("unit-test election preconditions are enforced") {
  EngineOptions opts;
  // ring protocols refuse a clique
  EventEngine clique(build_clique(4), SynchronousDelay{1}, FaultPlan{}, opts);
  CHECK_THROWS_AS(install_chang_roberts(clique), Error);
  CHECK_THROWS_AS(install_dkr(clique), Error);
  CHECK_THROWS_AS(install_hs(clique), Error);
  CHECK_THROWS_AS(install_itai_rodeh(clique), Error);
  // the takeover protocol refuses a ring
  EventEngine ring(build_ring(4), SynchronousDelay{1}, FaultPlan{}, opts);
  CHECK_THROWS_AS(install_bully(ring), Error);
  // doubling probes need both directions
  EventEngine uni(build_ring(4, RingDirection::uni), SynchronousDelay{1}, FaultPlan{}, opts);
  CHECK_THROWS_AS(install_hs(uni), Error);
  // ID-comparing protocols refuse anonymous networks
  EventEngine anon(build_ring(4, RingDirection::uni, IdOrder::sorted, 0, {}, true),
                   SynchronousDelay{1}, FaultPlan{}, opts);
  CHECK_THROWS_AS(install_chang_roberts(anon), Error);
  CHECK_THROWS_AS(install_dkr(anon), Error);
  // the lottery needs the synchronous model
  EventEngine psync(build_ring(4, RingDirection::uni, IdOrder::sorted, 0, {}, true),
                    PartiallySynchronousDelay{10, 2, 0}, FaultPlan{}, opts);
  CHECK_THROWS_AS(install_itai_rodeh(psync), Error);
  // timeouts must cover a round trip
  EventEngine tight(build_clique(4), SynchronousDelay{3}, FaultPlan{}, opts);
  CHECK_THROWS_AS(install_bully(tight, BullyConfig{5, 0}), Error);  // sound minimum is 7
  EventEngine async(build_clique(4), AsynchronousDelay{}, FaultPlan{}, opts);
  CHECK_THROWS_AS(install_bully(async), Error);
  CHECK_THROWS_AS(sound_bully_timeout(AsynchronousDelay{}), Error);
  CHECK(sound_bully_timeout(SynchronousDelay{3}) == 7);
  CHECK(sound_bully_timeout(PartiallySynchronousDelay{50, 2, 0}) == 41);  // pre-bound 20
}

TEST_CASE("unit-test error codes carry hyphenated names") {
  try {
    EventEngine uni(build_ring(3, RingDirection::uni), SynchronousDelay{1}, FaultPlan{},
                    EngineOptions{});
    install_hs(uni);
    FAIL("expected a topology mismatch");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::topology_mismatch);
    CHECK(std::string(error_code_name(err.code())) == "topology-mismatch");
  }
  try {
    sound_bully_timeout(AsynchronousDelay{});
    FAIL("expected an unsound timeout");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::unsound_timeout);
    CHECK(std::string(error_code_name(err.code())) == "unsound-timeout");
  }
}
