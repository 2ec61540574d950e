#include "cowsettle/order_graph.hpp"

#include <algorithm>
#include <deque>
#include <limits>

#include "cowsettle/error.hpp"

namespace cowsettle {

std::optional<std::size_t> AssetGraph::node_index(const AssetId& asset) const {
  auto it = std::find(nodes_.begin(), nodes_.end(), asset);
  if (it == nodes_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - nodes_.begin());
}

AssetGraph build_graph(std::span<const SwapOrder> orders) {
  AssetGraph g;
  auto intern = [&g](const AssetId& asset) {
    if (auto idx = g.node_index(asset)) return *idx;
    g.nodes_.push_back(asset);
    g.out_.emplace_back();
    g.in_.emplace_back();
    return g.nodes_.size() - 1;
  };
  for (std::size_t i = 0; i < orders.size(); ++i) {
    std::size_t from = intern(orders[i].give_asset());
    std::size_t to = intern(orders[i].want_asset());
    g.edges_.push_back(GraphEdge{orders[i].give_asset(), orders[i].want_asset(), i});
    g.edge_from_.push_back(from);
    g.edge_to_.push_back(to);
    g.out_[from].push_back(i);
    g.in_[to].push_back(i);
  }
  return g;
}

namespace {

constexpr std::size_t kUnreachable = std::numeric_limits<std::size_t>::max();

class BoundedCycleSearch {
 public:
  BoundedCycleSearch(const AssetGraph& graph, std::size_t k_max)
      : graph_(graph), k_max_(k_max), on_path_(graph.nodes().size(), false) {}

  std::vector<std::vector<std::size_t>> run() {
    for (std::size_t root = 0; root < graph_.nodes().size(); ++root) {
      root_ = root;
      compute_distances_to_root();
      if (distance_[root_] == kUnreachable) continue;
      on_path_[root_] = true;
      extend(root_);
      on_path_[root_] = false;
    }
    return std::move(found_);
  }

 private:
  // Shortest edge count from each node back to the root, restricted to nodes >= root.
  void compute_distances_to_root() {
    distance_.assign(graph_.nodes().size(), kUnreachable);
    std::deque<std::size_t> queue;
    for (std::size_t e : graph_.in_edges(root_)) {
      std::size_t u = graph_.from_node(e);
      if (u > root_ && distance_[u] == kUnreachable) {
        distance_[u] = 1;
        queue.push_back(u);
      }
    }
    while (!queue.empty()) {
      std::size_t v = queue.front();
      queue.pop_front();
      for (std::size_t e : graph_.in_edges(v)) {
        std::size_t u = graph_.from_node(e);
        if (u > root_ && distance_[u] == kUnreachable) {
          distance_[u] = distance_[v] + 1;
          queue.push_back(u);
        }
      }
    }
    bool closes = false;
    for (std::size_t e : graph_.out_edges(root_)) {
      if (distance_[graph_.to_node(e)] != kUnreachable) closes = true;
    }
    distance_[root_] = closes ? 0 : kUnreachable;
  }

  void extend(std::size_t node) {
    for (std::size_t e : graph_.out_edges(node)) {
      std::size_t next = graph_.to_node(e);
      if (next == root_) {
        if (path_.size() + 1 >= 2) {
          path_.push_back(e);
          found_.push_back(path_);
          path_.pop_back();
        }
        continue;
      }
      if (next < root_ || on_path_[next] || distance_[next] == kUnreachable) continue;
      if (path_.size() + 1 + distance_[next] > k_max_) continue;
      on_path_[next] = true;
      path_.push_back(e);
      extend(next);
      path_.pop_back();
      on_path_[next] = false;
    }
  }

  const AssetGraph& graph_;
  std::size_t k_max_;
  std::size_t root_ = 0;
  std::vector<std::size_t> distance_;
  std::vector<bool> on_path_;
  std::vector<std::size_t> path_;
  std::vector<std::vector<std::size_t>> found_;
};

}  // namespace

std::vector<std::size_t> rotate_to(std::span<const std::size_t> cycle, std::size_t first) {
  auto it = std::find(cycle.begin(), cycle.end(), first);
  if (it == cycle.end()) throw CycleError("rotate_to: index not part of cycle");
  std::vector<std::size_t> out(it, cycle.end());
  out.insert(out.end(), cycle.begin(), it);
  return out;
}

std::vector<CycleCandidate> enumerate_cycles(const AssetGraph& graph, int k_max) {
  if (k_max < 2) throw CycleError("enumerate_cycles: k_max must be at least 2");
  auto raw = BoundedCycleSearch(graph, static_cast<std::size_t>(k_max)).run();

  std::vector<CycleCandidate> cycles;
  cycles.reserve(raw.size());
  for (auto& edges : raw) {
    auto lowest = *std::min_element(edges.begin(), edges.end());
    CycleCandidate c;
    c.order_indices = rotate_to(edges, lowest);
    for (std::size_t e : c.order_indices) c.assets.push_back(graph.edges()[e].from);
    c.assets.push_back(c.assets.front());
    cycles.push_back(std::move(c));
  }
  std::sort(cycles.begin(), cycles.end(), [](const CycleCandidate& a, const CycleCandidate& b) {
    return a.order_indices < b.order_indices;
  });
  return cycles;
}

bool satisfies_cyclic_closure(std::span<const SwapOrder> legs) {
  if (legs.empty()) return false;
  for (std::size_t j = 0; j < legs.size(); ++j) {
    if (!(legs[j].want_asset() == legs[(j + 1) % legs.size()].give_asset())) return false;
  }
  return true;
}

bool satisfies_path_closure(std::span<const SwapOrder> legs) {
  for (std::size_t j = 0; j + 1 < legs.size(); ++j) {
    if (!(legs[j].want_asset() == legs[j + 1].give_asset())) return false;
  }
  return !legs.empty();
}

}  // namespace cowsettle
