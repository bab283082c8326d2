#ifndef ELAB_TOPOLOGY_HPP
#define ELAB_TOPOLOGY_HPP

#include <cstddef>
#include <utility>
#include <vector>

#include "elab/ids.hpp"

namespace elab {

enum class TopologyKind { ring, clique, arbitrary };
enum class RingDirection { uni, bi };
enum class IdOrder { sorted, random, given };

const char* topology_kind_name(TopologyKind k);

// Directed communication graph over dense node IDs 0..n-1. A "uni" ring only
// has edges in the successor direction; everything else is symmetric.
class Topology {
 public:
  TopologyKind kind() const { return kind_; }
  std::size_t size() const { return n_; }
  bool anonymous() const { return anonymous_; }
  RingDirection direction() const { return direction_; }

  bool has_edge(NodeId from, NodeId to) const;
  const std::vector<NodeId>& neighbors(NodeId id) const;  // out-neighbors, ascending
  std::size_t degree(NodeId id) const;

  // Longest shortest directed path; throws not-connected if some pair is
  // unreachable.
  std::size_t diameter() const;

  // Ring position helpers (ring kind only): the node that follows / precedes
  // `id` in message direction.
  NodeId ring_successor(NodeId id) const;
  NodeId ring_predecessor(NodeId id) const;

  // IDs in ring position order, starting at position 0.
  const std::vector<NodeId>& ring_order() const;

  void require_node(NodeId id) const;

 private:
  friend Topology build_ring(std::size_t, RingDirection, IdOrder, std::uint64_t,
                             const std::vector<NodeId>&, bool);
  friend Topology build_clique(std::size_t);
  friend Topology build_arbitrary(std::size_t, const std::vector<std::pair<NodeId, NodeId>>&, bool);

  TopologyKind kind_ = TopologyKind::arbitrary;
  RingDirection direction_ = RingDirection::bi;
  std::size_t n_ = 0;
  bool anonymous_ = false;
  std::vector<std::vector<NodeId>> adj_;  // sorted out-neighbor lists
  std::vector<NodeId> ring_order_;        // ring kind: id at each position
  std::vector<std::size_t> ring_pos_;     // ring kind: position of each id
};

// id_order decides which ID sits at which ring position: sorted places ID i
// at position i, random shuffles positions from `seed`, given uses
// `explicit_ids` (a permutation of 0..n-1) as the position order.
Topology build_ring(std::size_t n, RingDirection direction = RingDirection::uni,
                    IdOrder id_order = IdOrder::sorted, std::uint64_t seed = 0,
                    const std::vector<NodeId>& explicit_ids = {}, bool anonymous = false);

Topology build_clique(std::size_t n);

// Explicit edge list; `symmetric` adds both directions per pair. The graph
// must come out strongly connected.
Topology build_arbitrary(std::size_t n, const std::vector<std::pair<NodeId, NodeId>>& edges,
                         bool symmetric = true);

} // namespace elab

#endif
