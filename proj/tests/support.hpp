#ifndef ELAB_TESTS_SUPPORT_HPP
#define ELAB_TESTS_SUPPORT_HPP

#include <functional>
#include <memory>

#include "elab/engine.hpp"

namespace elab::testing {

// Ad-hoc automaton assembled from lambdas; keeps engine tests compact.
struct FnNode : NodeAutomaton {
  std::function<void(Ctx&)> start;
  std::function<void(Ctx&, const Envelope&)> message;
  std::function<void(Ctx&, std::int32_t, std::int64_t)> timer;

  void on_start(Ctx& ctx) override {
    if (start) start(ctx);
  }
  void on_message(Ctx& ctx, const Envelope& e) override {
    if (message) message(ctx, e);
  }
  void on_timer(Ctx& ctx, std::int32_t tag, std::int64_t arg) override {
    if (timer) timer(ctx, tag, arg);
  }
};

inline std::unique_ptr<FnNode> fn_node(std::function<void(Ctx&)> start = nullptr,
                                       std::function<void(Ctx&, const Envelope&)> message = nullptr,
                                       std::function<void(Ctx&, std::int32_t, std::int64_t)> timer = nullptr) {
  auto node = std::make_unique<FnNode>();
  node->start = std::move(start);
  node->message = std::move(message);
  node->timer = std::move(timer);
  return node;
}

// Envelope records of a trace, in send order.
inline std::vector<Envelope> trace_envelopes(const Trace& trace) {
  std::vector<Envelope> out;
  for (const TraceRecord& rec : trace)
    if (const Envelope* e = std::get_if<Envelope>(&rec)) out.push_back(*e);
  return out;
}

} // namespace elab::testing

#endif
