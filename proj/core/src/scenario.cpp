#include "elab/scenario.hpp"

#include <json.hpp>

#include "elab/error.hpp"

namespace elab {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& ptr, const std::string& msg) {
  throw Error(ErrorCode::config_error, ptr, msg);
}

std::string get_string(const json& j, const std::string& ptr) {
  if (!j.is_string()) bad(ptr, "expected a string");
  return j.get<std::string>();
}

bool get_bool(const json& j, const std::string& ptr) {
  if (!j.is_boolean()) bad(ptr, "expected a boolean");
  return j.get<bool>();
}

std::int64_t get_int(const json& j, const std::string& ptr) {
  if (!j.is_number_integer()) bad(ptr, "expected an integer");
  return j.get<std::int64_t>();
}

std::int64_t get_nonneg(const json& j, const std::string& ptr) {
  const std::int64_t v = get_int(j, ptr);
  if (v < 0) bad(ptr, "must not be negative");
  return v;
}

std::uint32_t get_u32(const json& j, const std::string& ptr) {
  const std::int64_t v = get_nonneg(j, ptr);
  if (v > 0xffffffffLL) bad(ptr, "out of range");
  return std::uint32_t(v);
}

Channel parse_channel(const json& j, const std::string& ptr) {
  const std::string s = get_string(j, ptr);
  if (s == "classical") return Channel::classical;
  if (s == "quantum") return Channel::quantum;
  bad(ptr, "unknown channel '" + s + "'");
}

MessageMatcher parse_matcher(const json& j, const std::string& ptr) {
  if (!j.is_object()) bad(ptr, "expected an object");
  MessageMatcher m;
  for (const auto& [key, val] : j.items()) {
    const std::string kp = ptr + "/" + key;
    if (key == "tag")
      m.tag = get_string(val, kp);
    else if (key == "src")
      m.src = get_u32(val, kp);
    else if (key == "dst")
      m.dst = get_u32(val, kp);
    else if (key == "channel")
      m.channel = parse_channel(val, kp);
    else if (key == "after")
      m.after = get_nonneg(val, kp);
    else
      bad(kp, "unknown key");
  }
  return m;
}

BootstrapProtocol parse_bootstrap(const json& j, const std::string& ptr) {
  const std::string s = get_string(j, ptr);
  if (s == "bully") return BootstrapProtocol::bully;
  if (s == "chang-roberts") return BootstrapProtocol::chang_roberts;
  if (s == "hs" || s == "hirschberg-sinclair") return BootstrapProtocol::hs;
  bad(ptr, "unknown bootstrap protocol '" + s + "'");
}

} // namespace

ScenarioConfig parse_scenario(const std::string& json_text) {
  json j = json::parse(json_text, nullptr, false);
  if (j.is_discarded()) bad("", "not valid JSON");
  if (!j.is_object()) bad("", "expected a JSON object");

  ScenarioConfig cfg;
  bool saw_protocol = false, saw_n = false;

  for (const auto& [key, val] : j.items()) {
    const std::string kp = "/" + key;
    if (key == "name") {
      cfg.name = get_string(val, kp);
    } else if (key == "protocol") {
      cfg.protocol = get_string(val, kp);
      saw_protocol = true;
    } else if (key == "n") {
      cfg.n = get_u32(val, kp);
      saw_n = true;
    } else if (key == "topology") {
      cfg.topology = get_string(val, kp);
    } else if (key == "direction") {
      cfg.direction = get_string(val, kp);
    } else if (key == "anonymous") {
      cfg.anonymous = get_bool(val, kp);
    } else if (key == "id_order") {
      cfg.id_order = get_string(val, kp);
    } else if (key == "ids") {
      if (!val.is_array()) bad(kp, "expected an array");
      for (std::size_t i = 0; i < val.size(); ++i)
        cfg.ids.push_back(get_u32(val[i], kp + "/" + std::to_string(i)));
    } else if (key == "id_seed") {
      cfg.id_seed = std::uint64_t(get_nonneg(val, kp));
    } else if (key == "delay") {
      cfg.delay = get_string(val, kp);
    } else if (key == "delta") {
      cfg.delta = get_nonneg(val, kp);
      if (cfg.delta < 1) bad(kp, "must be at least 1");
    } else if (key == "gst") {
      cfg.gst = get_nonneg(val, kp);
    } else if (key == "pre_bound") {
      cfg.pre_bound = get_nonneg(val, kp);
    } else if (key == "max_delay") {
      cfg.max_delay = get_nonneg(val, kp);
      if (cfg.max_delay < 1) bad(kp, "must be at least 1");
    } else if (key == "stall") {
      cfg.stall = parse_matcher(val, kp);
    } else if (key == "f_max") {
      cfg.faults.f_max = get_u32(val, kp);
    } else if (key == "crashes") {
      if (!val.is_array()) bad(kp, "expected an array");
      for (std::size_t i = 0; i < val.size(); ++i) {
        const std::string ip = kp + "/" + std::to_string(i);
        if (!val[i].is_object()) bad(ip, "expected an object");
        CrashFault c;
        bool saw_node = false;
        for (const auto& [ck, cv] : val[i].items()) {
          const std::string cp = ip + "/" + ck;
          if (ck == "node") {
            c.node = get_u32(cv, cp);
            saw_node = true;
          } else if (ck == "at") {
            c.at = get_nonneg(cv, cp);
          } else {
            bad(cp, "unknown key");
          }
        }
        if (!saw_node) bad(ip, "missing 'node'");
        cfg.faults.crashes.push_back(c);
      }
    } else if (key == "omissions") {
      if (!val.is_array()) bad(kp, "expected an array");
      for (std::size_t i = 0; i < val.size(); ++i)
        cfg.faults.omissions.push_back(parse_matcher(val[i], kp + "/" + std::to_string(i)));
    } else if (key == "crash_on_measure") {
      cfg.faults.crash_on_measure = get_u32(val, kp);
    } else if (key == "d") {
      cfg.quantum.dimension = std::int32_t(get_nonneg(val, kp));
    } else if (key == "f") {
      cfg.quantum.f = get_u32(val, kp);
    } else if (key == "ttl") {
      cfg.quantum.ttl = get_nonneg(val, kp);
    } else if (key == "heartbeat") {
      cfg.quantum.heartbeat_every = get_nonneg(val, kp);
    } else if (key == "window_always") {
      cfg.quantum.window_always = get_bool(val, kp);
    } else if (key == "bootstrap") {
      cfg.quantum.bootstrap = parse_bootstrap(val, kp);
    } else if (key == "rounds") {
      cfg.quantum.trigger_rounds = std::int32_t(get_nonneg(val, kp));
    } else if (key == "trigger_node") {
      cfg.quantum.trigger_node = get_u32(val, kp);
    } else if (key == "trigger_gap") {
      cfg.quantum.trigger_gap = get_nonneg(val, kp);
    } else if (key == "detect_timeout") {
      cfg.quantum.detect_timeout = get_nonneg(val, kp);
    } else if (key == "ack_timeout") {
      cfg.quantum.ack_timeout = get_nonneg(val, kp);
    } else if (key == "share_timeout") {
      cfg.quantum.share_timeout = get_nonneg(val, kp);
    } else if (key == "answer_timeout") {
      cfg.bully.answer_timeout = get_nonneg(val, kp);
    } else if (key == "coordinator_timeout") {
      cfg.bully.coordinator_timeout = get_nonneg(val, kp);
    } else if (key == "seed") {
      cfg.seed = std::uint64_t(get_nonneg(val, kp));
    } else if (key == "event_limit") {
      cfg.event_limit = std::uint64_t(get_nonneg(val, kp));
      if (cfg.event_limit == 0) bad(kp, "must be positive");
    } else if (key == "collect_trace") {
      cfg.collect_trace = get_bool(val, kp);
    } else if (key == "decide_round") {
      cfg.decide_round = std::int32_t(get_nonneg(val, kp));
    } else {
      bad(kp, "unknown key");
    }
  }

  if (!saw_protocol) bad("/protocol", "required");
  if (!saw_n) bad("/n", "required");
  return cfg;
}

namespace {

struct ProtocolTraits {
  bool ring_default = true;
  RingDirection direction = RingDirection::uni;
};

ProtocolTraits traits_for(const ScenarioConfig& cfg) {
  const std::string& p = cfg.protocol;
  if (p == "chang-roberts" || p == "dolev-klawe-rodeh" || p == "itai-rodeh")
    return {true, RingDirection::uni};
  if (p == "hirschberg-sinclair") return {true, RingDirection::bi};
  if (p == "bully") return {false, RingDirection::uni};
  if (p == "quantum")
    return {false, cfg.quantum.bootstrap == BootstrapProtocol::hs ? RingDirection::bi
                                                                  : RingDirection::uni};
  bad("/protocol", "unknown protocol '" + p + "'");
}

Topology make_topology(const ScenarioConfig& cfg) {
  const ProtocolTraits tr = traits_for(cfg);
  std::string kind = cfg.topology;
  if (kind.empty()) kind = tr.ring_default ? "ring" : "clique";

  if (kind == "clique") {
    if (cfg.anonymous) bad("/anonymous", "clique nodes are identified");
    return build_clique(cfg.n);
  }
  if (kind != "ring") bad("/topology", "unknown topology '" + kind + "'");

  RingDirection dir = tr.direction;
  if (!cfg.direction.empty()) {
    if (cfg.direction == "uni")
      dir = RingDirection::uni;
    else if (cfg.direction == "bi")
      dir = RingDirection::bi;
    else
      bad("/direction", "unknown direction '" + cfg.direction + "'");
  }

  IdOrder order = IdOrder::sorted;
  if (cfg.id_order == "sorted")
    order = IdOrder::sorted;
  else if (cfg.id_order == "random")
    order = IdOrder::random;
  else if (cfg.id_order == "given")
    order = IdOrder::given;
  else
    bad("/id_order", "unknown id order '" + cfg.id_order + "'");

  return build_ring(cfg.n, dir, order, cfg.id_seed, cfg.ids, cfg.anonymous);
}

DelayModel make_delay(const ScenarioConfig& cfg) {
  if (cfg.delay == "synchronous") {
    if (cfg.stall) bad("/stall", "the stall adversary needs the asynchronous model");
    return SynchronousDelay{cfg.delta};
  }
  if (cfg.delay == "partially-synchronous") {
    if (cfg.stall) bad("/stall", "the stall adversary needs the asynchronous model");
    return PartiallySynchronousDelay{cfg.gst, cfg.delta, cfg.pre_bound};
  }
  if (cfg.delay == "asynchronous") return AsynchronousDelay{cfg.max_delay, cfg.stall};
  bad("/delay", "unknown delay model '" + cfg.delay + "'");
}

} // namespace

std::unique_ptr<EventEngine> build_scenario(const ScenarioConfig& cfg) {
  Topology topo = make_topology(cfg);
  DelayModel delay = make_delay(cfg);

  EngineOptions opts;
  opts.seed = cfg.seed;
  opts.event_limit = cfg.event_limit;
  opts.collect_trace = cfg.collect_trace;
  opts.stop_on_decision = cfg.decide_round.has_value();

  auto eng = std::make_unique<EventEngine>(std::move(topo), delay, cfg.faults, opts);

  if (cfg.protocol == "chang-roberts")
    install_chang_roberts(*eng);
  else if (cfg.protocol == "dolev-klawe-rodeh")
    install_dkr(*eng);
  else if (cfg.protocol == "hirschberg-sinclair")
    install_hs(*eng);
  else if (cfg.protocol == "itai-rodeh")
    install_itai_rodeh(*eng);
  else if (cfg.protocol == "bully")
    install_bully(*eng, cfg.bully);
  else if (cfg.protocol == "quantum")
    install_quantum_election(*eng, cfg.quantum);
  else
    bad("/protocol", "unknown protocol '" + cfg.protocol + "'");

  if (cfg.decide_round) {
    const std::int32_t round = *cfg.decide_round;
    eng->set_decision_predicate(
        [round](const EventEngine& e) { return e.live_nodes_agree(round); });
  }
  return eng;
}

namespace {

RunReport package(const ScenarioConfig& cfg, EventEngine& eng) {
  RunReport r;
  r.name = cfg.name;
  r.protocol = cfg.protocol;
  r.n = cfg.n;
  r.seed = cfg.seed;
  r.metrics = eng.metrics();
  r.result = election_result(eng);
  if (cfg.collect_trace) {
    r.causal_time = elapsed_causal_time(eng.trace());
    if (cfg.protocol == "quantum") r.rounds = election_round_tallies(eng.trace());
  }
  return r;
}

} // namespace

RunReport run_scenario(const ScenarioConfig& cfg) {
  auto eng = build_scenario(cfg);
  eng->run();
  return package(cfg, *eng);
}

RunReport run_scenario(const ScenarioConfig& cfg, Trace& trace_out) {
  auto eng = build_scenario(cfg);
  eng->run();
  RunReport r = package(cfg, *eng);
  trace_out = eng->trace();
  return r;
}

} // namespace elab
