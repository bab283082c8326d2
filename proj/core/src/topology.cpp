#include "elab/topology.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <string>

#include "elab/error.hpp"
#include "elab/rng.hpp"

namespace elab {

const char* topology_kind_name(TopologyKind k) {
  switch (k) {
    case TopologyKind::ring: return "ring";
    case TopologyKind::clique: return "clique";
    case TopologyKind::arbitrary: return "arbitrary";
  }
  return "?";
}

void Topology::require_node(NodeId id) const {
  if (id >= n_) {
    throw Error(ErrorCode::no_such_node, "node " + std::to_string(id) + " not in 0.." + std::to_string(n_ - 1));
  }
}

bool Topology::has_edge(NodeId from, NodeId to) const {
  require_node(from);
  require_node(to);
  const auto& out = adj_[from];
  return std::binary_search(out.begin(), out.end(), to);
}

const std::vector<NodeId>& Topology::neighbors(NodeId id) const {
  require_node(id);
  return adj_[id];
}

std::size_t Topology::degree(NodeId id) const { return neighbors(id).size(); }

std::size_t Topology::diameter() const {
  std::size_t best = 0;
  std::vector<std::size_t> dist(n_);
  for (NodeId src = 0; src < n_; ++src) {
    std::fill(dist.begin(), dist.end(), SIZE_MAX);
    dist[src] = 0;
    std::queue<NodeId> q;
    q.push(src);
    while (!q.empty()) {
      NodeId u = q.front();
      q.pop();
      for (NodeId v : adj_[u]) {
        if (dist[v] == SIZE_MAX) {
          dist[v] = dist[u] + 1;
          q.push(v);
        }
      }
    }
    for (NodeId v = 0; v < n_; ++v) {
      if (dist[v] == SIZE_MAX) {
        throw Error(ErrorCode::not_connected,
                    "node " + std::to_string(v) + " unreachable from " + std::to_string(src));
      }
      best = std::max(best, dist[v]);
    }
  }
  return best;
}

NodeId Topology::ring_successor(NodeId id) const {
  if (kind_ != TopologyKind::ring) throw Error(ErrorCode::topology_mismatch, "ring_successor on non-ring");
  require_node(id);
  std::size_t p = ring_pos_[id];
  return ring_order_[(p + 1) % n_];
}

NodeId Topology::ring_predecessor(NodeId id) const {
  if (kind_ != TopologyKind::ring) throw Error(ErrorCode::topology_mismatch, "ring_predecessor on non-ring");
  require_node(id);
  std::size_t p = ring_pos_[id];
  return ring_order_[(p + n_ - 1) % n_];
}

const std::vector<NodeId>& Topology::ring_order() const {
  if (kind_ != TopologyKind::ring) throw Error(ErrorCode::topology_mismatch, "ring_order on non-ring");
  return ring_order_;
}

namespace {

void sort_adjacency(std::vector<std::vector<NodeId>>& adj) {
  for (auto& out : adj) {
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  }
}

void check_connected(const Topology& t) {
  t.diameter();  // throws not-connected on any unreachable pair
}

} // namespace

Topology build_ring(std::size_t n, RingDirection direction, IdOrder id_order, std::uint64_t seed,
                    const std::vector<NodeId>& explicit_ids, bool anonymous) {
  if (n < 2) throw Error(ErrorCode::invalid_size, "ring needs n >= 2, got " + std::to_string(n));

  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), 0);
  switch (id_order) {
    case IdOrder::sorted:
      break;
    case IdOrder::random: {
      Rng r = derive_rng(seed, 0x746f706fULL);  // independent of protocol streams
      r.shuffle(order);
      break;
    }
    case IdOrder::given: {
      if (explicit_ids.size() != n) {
        throw Error(ErrorCode::invalid_ids, "explicit id order must list all " + std::to_string(n) + " ids");
      }
      std::vector<bool> seen(n, false);
      for (NodeId id : explicit_ids) {
        if (id >= n || seen[id]) {
          throw Error(ErrorCode::invalid_ids, "explicit id order must be a permutation of 0.." + std::to_string(n - 1));
        }
        seen[id] = true;
      }
      order = explicit_ids;
      break;
    }
  }

  Topology t;
  t.kind_ = TopologyKind::ring;
  t.direction_ = direction;
  t.n_ = n;
  t.anonymous_ = anonymous;
  t.ring_order_ = order;
  t.ring_pos_.assign(n, 0);
  for (std::size_t p = 0; p < n; ++p) t.ring_pos_[order[p]] = p;
  t.adj_.assign(n, {});
  for (std::size_t p = 0; p < n; ++p) {
    NodeId a = order[p];
    NodeId b = order[(p + 1) % n];
    t.adj_[a].push_back(b);
    if (direction == RingDirection::bi) t.adj_[b].push_back(a);
  }
  sort_adjacency(t.adj_);
  return t;
}

Topology build_clique(std::size_t n) {
  if (n < 2) throw Error(ErrorCode::invalid_size, "clique needs n >= 2, got " + std::to_string(n));
  Topology t;
  t.kind_ = TopologyKind::clique;
  t.direction_ = RingDirection::bi;
  t.n_ = n;
  t.adj_.assign(n, {});
  for (NodeId a = 0; a < n; ++a) {
    for (NodeId b = 0; b < n; ++b) {
      if (a != b) t.adj_[a].push_back(b);
    }
  }
  return t;
}

Topology build_arbitrary(std::size_t n, const std::vector<std::pair<NodeId, NodeId>>& edges,
                         bool symmetric) {
  if (n < 2) throw Error(ErrorCode::invalid_size, "topology needs n >= 2, got " + std::to_string(n));
  Topology t;
  t.kind_ = TopologyKind::arbitrary;
  t.direction_ = RingDirection::bi;
  t.n_ = n;
  t.adj_.assign(n, {});
  for (auto [a, b] : edges) {
    if (a >= n || b >= n) {
      throw Error(ErrorCode::invalid_ids,
                  "edge (" + std::to_string(a) + "," + std::to_string(b) + ") outside 0.." + std::to_string(n - 1));
    }
    if (a == b) throw Error(ErrorCode::invalid_ids, "self-loop on node " + std::to_string(a));
    t.adj_[a].push_back(b);
    if (symmetric) t.adj_[b].push_back(a);
  }
  sort_adjacency(t.adj_);
  check_connected(t);
  return t;
}

} // namespace elab
