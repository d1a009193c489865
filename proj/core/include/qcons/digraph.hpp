#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace qcons {

using NodeId = std::size_t;

/// A directed link: `receiver` can hear `sender`, not the other way around.
struct Edge {
  NodeId sender = 0;
  NodeId receiver = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Static communication digraph on nodes 0..n-1 without self-loops or
/// parallel edges. Neighbor lists are kept sorted by node index.
class Digraph {
 public:
  /// Validates and deduplicates `edges`. Throws GraphError on an
  /// out-of-range endpoint or a self-loop.
  static Digraph build(std::size_t node_count, std::span<const Edge> edges);

  std::size_t node_count() const { return out_.size(); }
  std::size_t edge_count() const { return edge_count_; }

  std::span<const NodeId> out_neighbors(NodeId j) const { return out_.at(j); }
  std::span<const NodeId> in_neighbors(NodeId j) const { return in_.at(j); }
  std::size_t out_degree(NodeId j) const { return out_.at(j).size(); }
  std::size_t in_degree(NodeId j) const { return in_.at(j).size(); }
  std::size_t max_in_degree() const;

  bool has_edge(NodeId sender, NodeId receiver) const;

  /// All edges ordered by (sender, receiver).
  std::vector<Edge> edges() const;

  friend bool operator==(const Digraph&, const Digraph&) = default;

 private:
  Digraph() = default;

  std::vector<std::vector<NodeId>> out_;
  std::vector<std::vector<NodeId>> in_;
  std::size_t edge_count_ = 0;
};

/// Forward and backward reachability sweeps from node 0.
bool is_strongly_connected(const Digraph& g);

/// Erdos-Renyi directed graph G(n, p), redrawn until strongly connected.
/// Deterministic in `seed`. Throws GraphError when `max_attempts` draws all
/// fail, ConfigError on n < 2 or p outside (0, 1].
Digraph generate_random_strongly_connected(std::size_t node_count, double edge_probability,
                                           std::uint64_t seed,
                                           std::size_t max_attempts = 10'000);

/// Per-node round-robin order over out-neighbors. order(j)[p] is the
/// out-neighbor that node j assigns priority p.
class PriorityMap {
 public:
  /// Validates that every node's order is a permutation of its out-neighbors.
  /// Throws GraphError otherwise.
  static PriorityMap from_orders(const Digraph& g, std::vector<std::vector<NodeId>> orders);

  std::span<const NodeId> order(NodeId j) const { return orders_.at(j); }
  std::size_t node_count() const { return orders_.size(); }

  /// Priority that node j gave to out-neighbor l. Throws GraphError if l is
  /// not an out-neighbor of j.
  std::size_t priority_of(NodeId j, NodeId l) const;

  friend bool operator==(const PriorityMap&, const PriorityMap&) = default;

 private:
  explicit PriorityMap(std::vector<std::vector<NodeId>> orders) : orders_(std::move(orders)) {}

  std::vector<std::vector<NodeId>> orders_;
};

enum class PriorityStrategy { by_node_index, seeded_shuffle };

PriorityMap assign_priorities(const Digraph& g, PriorityStrategy strategy, std::uint64_t seed = 0);

/// One explicit assignment: node `node` gives `neighbor` priority `priority`.
struct PriorityEntry {
  NodeId node = 0;
  NodeId neighbor = 0;
  std::size_t priority = 0;
};

/// Starts from by_node_index and replaces the order of every node mentioned in
/// `entries`. A mentioned node must list all of its out-neighbors exactly once
/// with priorities 0..D+-1.
PriorityMap override_priorities(const Digraph& g, std::span<const PriorityEntry> entries);

}  // namespace qcons
