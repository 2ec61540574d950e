#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "cowsettle/asset.hpp"
#include "cowsettle/swap_order.hpp"

namespace cowsettle {

struct GraphEdge {
  AssetId from;
  AssetId to;
  std::size_t order_index;
};

/// Directed multigraph over assets with one edge per order (give -> want).
///
/// Nodes are listed in order of first appearance in the batch; edges keep the
/// batch order, so `edges()[i].order_index == i`.
class AssetGraph {
 public:
  const std::vector<AssetId>& nodes() const noexcept { return nodes_; }
  const std::vector<GraphEdge>& edges() const noexcept { return edges_; }

  std::optional<std::size_t> node_index(const AssetId& asset) const;

  /// Edge indices leaving / entering a node, ascending.
  const std::vector<std::size_t>& out_edges(std::size_t node) const { return out_[node]; }
  const std::vector<std::size_t>& in_edges(std::size_t node) const { return in_[node]; }

  std::size_t from_node(std::size_t edge) const { return edge_from_[edge]; }
  std::size_t to_node(std::size_t edge) const { return edge_to_[edge]; }

 private:
  friend AssetGraph build_graph(std::span<const SwapOrder> orders);

  std::vector<AssetId> nodes_;
  std::vector<GraphEdge> edges_;
  std::vector<std::size_t> edge_from_;
  std::vector<std::size_t> edge_to_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<std::vector<std::size_t>> in_;
};

AssetGraph build_graph(std::span<const SwapOrder> orders);

/// A simple directed cycle of orders.
///
/// `order_indices` is in canonical rotation (lowest index first). `assets` is
/// the closed asset sequence, so it has one more entry than `order_indices`
/// and ends where it starts.
struct CycleCandidate {
  std::vector<std::size_t> order_indices;
  std::vector<AssetId> assets;

  std::size_t length() const noexcept { return order_indices.size(); }

  friend bool operator==(const CycleCandidate& a, const CycleCandidate& b) {
    return a.order_indices == b.order_indices;
  }
};

/// Every simple cycle with 2..k_max edges, each reported once in canonical
/// rotation, sorted lexicographically by index sequence. Parallel edges yield
/// distinct cycles.
///
/// Johnson-style search rooted at each node in turn over the subgraph of
/// higher-indexed nodes; the blocking sets are replaced by a BFS distance
/// bound back to the root, which is what makes the depth limit sound.
std::vector<CycleCandidate> enumerate_cycles(const AssetGraph& graph, int k_max);

/// B_j == A_{(j mod k)+1} for every leg.
bool satisfies_cyclic_closure(std::span<const SwapOrder> legs);

/// B_j == A_{j+1} for consecutive legs (no wrap-around).
bool satisfies_path_closure(std::span<const SwapOrder> legs);

/// Rotates an index sequence so that `first` leads. `first` must be present.
std::vector<std::size_t> rotate_to(std::span<const std::size_t> cycle, std::size_t first);

}  // namespace cowsettle
