#include "elab/report.hpp"

#include <charconv>

#include "elab/error.hpp"

namespace elab {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  if (res.ec != std::errc{}) throw Error(ErrorCode::internal_error, "double format failed");
  return std::string(buf, res.ptr);
}

std::string verdict_line(const Verdict& v) {
  std::string s = v.note.empty() ? (v.pass ? "pass" : "FAIL") : v.note;
  s += " ";
  s += v.name;
  s += ": measured ";
  s += format_double(v.measured);
  s += " vs bound ";
  s += format_double(v.bound);
  return s;
}

namespace {

void put(std::string& out, std::uint64_t v) { out += std::to_string(v); }
void put(std::string& out, std::int64_t v) { out += std::to_string(v); }
void put(std::string& out, std::uint32_t v) { out += std::to_string(v); }
void put(std::string& out, bool v) { out += v ? "true" : "false"; }

template <typename T>
void put_opt(std::string& out, const std::optional<T>& v) {
  if (v) put(out, *v);
}

// CSV fields here are numbers, bools, and names we control; quote only if a
// name ever carries a delimiter.
void put_text(std::string& out, const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) {
    out += s;
    return;
  }
  out += '"';
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
}

} // namespace

std::string report_csv_header() {
  return "name,protocol,n,seed,leader,agreed,messages_sent,classical_sent,quantum_sent,"
         "messages_delivered,dropped_messages,dead_deliveries,suppressed_sends,wall_steps,"
         "time_complexity,causal_time,terminated,decision_step,decision_time,rounds,"
         "last_round_total,last_round_causal\n";
}

std::string report_csv_row(const RunReport& r) {
  std::string out;
  put_text(out, r.name);
  out += ',';
  put_text(out, r.protocol);
  out += ',';
  put(out, r.n);
  out += ',';
  put(out, r.seed);
  out += ',';
  put_opt(out, r.result.leader);
  out += ',';
  put(out, r.result.agreed);
  out += ',';
  put(out, r.metrics.messages_sent);
  out += ',';
  put(out, r.metrics.classical_sent);
  out += ',';
  put(out, r.metrics.quantum_sent);
  out += ',';
  put(out, r.metrics.messages_delivered);
  out += ',';
  put(out, r.metrics.dropped_messages);
  out += ',';
  put(out, r.metrics.dead_deliveries);
  out += ',';
  put(out, r.metrics.suppressed_sends);
  out += ',';
  put(out, r.metrics.wall_steps);
  out += ',';
  put(out, r.metrics.time_complexity);
  out += ',';
  put(out, r.causal_time);
  out += ',';
  put(out, r.metrics.terminated);
  out += ',';
  put_opt(out, r.metrics.decision_step);
  out += ',';
  put_opt(out, r.metrics.decision_time);
  out += ',';
  put(out, std::uint64_t(r.rounds.size()));
  out += ',';
  if (!r.rounds.empty()) {
    put(out, r.rounds.back().total);
    out += ',';
    put(out, r.rounds.back().causal_time);
  } else {
    out += ',';
  }
  out += '\n';
  return out;
}

namespace {

void json_kv(std::string& out, const char* key, std::uint64_t v, bool first = false) {
  if (!first) out += ',';
  out += '"';
  out += key;
  out += "\":";
  out += std::to_string(v);
}

void json_kv(std::string& out, const char* key, std::int64_t v, bool first = false) {
  if (!first) out += ',';
  out += '"';
  out += key;
  out += "\":";
  out += std::to_string(v);
}

void json_kv(std::string& out, const char* key, std::int32_t v) { json_kv(out, key, std::int64_t(v)); }

void json_kv(std::string& out, const char* key, bool v) {
  out += ",\"";
  out += key;
  out += "\":";
  out += v ? "true" : "false";
}

void json_kv(std::string& out, const char* key, const char* v, bool first = false) {
  if (!first) out += ',';
  out += '"';
  out += key;
  out += "\":\"";
  out += v;  // tag/status names: no escapes needed
  out += '"';
}

void json_node(std::string& out, const char* key, NodeId v) {
  out += ",\"";
  out += key;
  out += "\":";
  if (v == NO_NODE)
    out += "null";
  else
    out += std::to_string(v);
}

void append_envelope(std::string& out, const Envelope& e) {
  out += "{";
  json_kv(out, "type", "message", true);
  json_kv(out, "id", std::uint64_t(e.id));
  json_node(out, "src", e.src);
  json_node(out, "dst", e.dst);
  json_kv(out, "channel", channel_name(e.channel));
  json_kv(out, "tag", payload_tag(e.payload));
  json_kv(out, "send_time", std::int64_t(e.send_time));
  out += ",\"deliver_time\":";
  out += e.deliver_time ? std::to_string(*e.deliver_time) : "null";
  json_kv(out, "causal_depth", std::uint64_t(e.causal_depth));
  json_kv(out, "status", delivery_status_name(e.status));
  json_kv(out, "sent_during", e.sent_during);
  json_kv(out, "delivered_during", e.delivered_during);
  out += "}\n";
}

void append_quantum(std::string& out, const QuantumEvent& q) {
  out += "{";
  json_kv(out, "type", "quantum", true);
  json_kv(out, "event", quantum_event_kind_name(q.kind));
  json_kv(out, "state", q.state_id);
  json_kv(out, "index", std::uint64_t(q.sequence_index));
  json_node(out, "node", q.node);
  json_kv(out, "time", std::int64_t(q.t));
  json_kv(out, "round", q.epoch.round);
  json_node(out, "claimant", q.epoch.claimant);
  json_kv(out, "digit", q.digit);
  json_kv(out, "decohered", q.decohered);
  out += "}\n";
}

void append_phase(std::string& out, const PhaseEvent& p) {
  out += "{";
  json_kv(out, "type", "phase", true);
  json_node(out, "node", p.node);
  json_kv(out, "time", std::int64_t(p.t));
  json_kv(out, "from", p.from);
  json_kv(out, "to", p.to);
  out += "}\n";
}

} // namespace

std::string trace_jsonl(const Trace& trace) {
  std::string out;
  out.reserve(trace.size() * 96);
  for (const TraceRecord& rec : trace) {
    if (const auto* e = std::get_if<Envelope>(&rec))
      append_envelope(out, *e);
    else if (const auto* q = std::get_if<QuantumEvent>(&rec))
      append_quantum(out, *q);
    else if (const auto* p = std::get_if<PhaseEvent>(&rec))
      append_phase(out, *p);
  }
  return out;
}

} // namespace elab
