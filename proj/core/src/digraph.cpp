#include "qcons/digraph.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <string>

#include "qcons/error.hpp"
#include "qcons/rng.hpp"

namespace qcons {

namespace {

std::vector<bool> reachable_from_zero(const std::vector<std::vector<NodeId>>& adjacency) {
  std::vector<bool> seen(adjacency.size(), false);
  if (adjacency.empty()) {
    return seen;
  }
  std::vector<NodeId> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    for (NodeId w : adjacency[v]) {
      if (!seen[w]) {
        seen[w] = true;
        stack.push_back(w);
      }
    }
  }
  return seen;
}

}  // namespace

Digraph Digraph::build(std::size_t node_count, std::span<const Edge> edges) {
  if (node_count == 0) {
    throw GraphError("digraph must have at least one node");
  }
  std::vector<Edge> sorted(edges.begin(), edges.end());
  for (const Edge& e : sorted) {
    if (e.sender >= node_count || e.receiver >= node_count) {
      std::ostringstream msg;
      msg << "edge (" << e.sender << " -> " << e.receiver << ") references a node outside [0, "
          << node_count << ")";
      throw GraphError(msg.str());
    }
    if (e.sender == e.receiver) {
      throw GraphError("self-loop on node " + std::to_string(e.sender));
    }
  }
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  Digraph g;
  g.out_.resize(node_count);
  g.in_.resize(node_count);
  for (const Edge& e : sorted) {
    g.out_[e.sender].push_back(e.receiver);
    g.in_[e.receiver].push_back(e.sender);
  }
  for (auto& list : g.in_) {
    std::sort(list.begin(), list.end());
  }
  g.edge_count_ = sorted.size();
  return g;
}

std::size_t Digraph::max_in_degree() const {
  std::size_t best = 0;
  for (const auto& list : in_) {
    best = std::max(best, list.size());
  }
  return best;
}

bool Digraph::has_edge(NodeId sender, NodeId receiver) const {
  if (sender >= node_count()) {
    return false;
  }
  const auto& list = out_[sender];
  return std::binary_search(list.begin(), list.end(), receiver);
}

std::vector<Edge> Digraph::edges() const {
  std::vector<Edge> result;
  result.reserve(edge_count_);
  for (NodeId s = 0; s < out_.size(); ++s) {
    for (NodeId r : out_[s]) {
      result.push_back({s, r});
    }
  }
  return result;
}

bool is_strongly_connected(const Digraph& g) {
  const std::size_t n = g.node_count();
  std::vector<std::vector<NodeId>> forward(n);
  std::vector<std::vector<NodeId>> backward(n);
  for (NodeId v = 0; v < n; ++v) {
    const auto outs = g.out_neighbors(v);
    forward[v].assign(outs.begin(), outs.end());
    const auto ins = g.in_neighbors(v);
    backward[v].assign(ins.begin(), ins.end());
  }
  const auto all = [](const std::vector<bool>& seen) {
    return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
  };
  return all(reachable_from_zero(forward)) && all(reachable_from_zero(backward));
}

Digraph generate_random_strongly_connected(std::size_t node_count, double edge_probability,
                                           std::uint64_t seed, std::size_t max_attempts) {
  if (node_count < 2) {
    throw ConfigError("random digraph generation needs at least 2 nodes");
  }
  if (!(edge_probability > 0.0 && edge_probability <= 1.0)) {
    throw ConfigError("edge probability must lie in (0, 1]");
  }
  Rng rng(seed);
  std::vector<Edge> edges;
  for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
    edges.clear();
    for (NodeId s = 0; s < node_count; ++s) {
      for (NodeId r = 0; r < node_count; ++r) {
        if (s != r && rng.bernoulli(edge_probability)) {
          edges.push_back({s, r});
        }
      }
    }
    Digraph g = Digraph::build(node_count, edges);
    if (is_strongly_connected(g)) {
      return g;
    }
  }
  std::ostringstream msg;
  msg << "no strongly connected digraph with n=" << node_count << ", p=" << edge_probability
      << " after " << max_attempts << " attempts";
  throw GraphError(msg.str());
}

PriorityMap PriorityMap::from_orders(const Digraph& g, std::vector<std::vector<NodeId>> orders) {
  if (orders.size() != g.node_count()) {
    throw GraphError("priority map covers " + std::to_string(orders.size()) +
                     " nodes, digraph has " + std::to_string(g.node_count()));
  }
  for (NodeId j = 0; j < orders.size(); ++j) {
    std::vector<NodeId> sorted = orders[j];
    std::sort(sorted.begin(), sorted.end());
    const auto outs = g.out_neighbors(j);
    if (!std::equal(sorted.begin(), sorted.end(), outs.begin(), outs.end())) {
      throw GraphError("priority order of node " + std::to_string(j + 1) +
                       " is not a permutation of its out-neighbors");
    }
  }
  return PriorityMap(std::move(orders));
}

std::size_t PriorityMap::priority_of(NodeId j, NodeId l) const {
  const auto& order = orders_.at(j);
  const auto it = std::find(order.begin(), order.end(), l);
  if (it == order.end()) {
    throw GraphError("node " + std::to_string(l + 1) + " is not an out-neighbor of node " +
                     std::to_string(j + 1));
  }
  return static_cast<std::size_t>(it - order.begin());
}

PriorityMap assign_priorities(const Digraph& g, PriorityStrategy strategy, std::uint64_t seed) {
  std::vector<std::vector<NodeId>> orders(g.node_count());
  Rng rng(seed);
  for (NodeId j = 0; j < g.node_count(); ++j) {
    const auto outs = g.out_neighbors(j);
    orders[j].assign(outs.begin(), outs.end());
    if (strategy == PriorityStrategy::seeded_shuffle) {
      rng.shuffle(std::span<NodeId>(orders[j]));
    }
  }
  return PriorityMap::from_orders(g, std::move(orders));
}

PriorityMap override_priorities(const Digraph& g, std::span<const PriorityEntry> entries) {
  std::vector<std::vector<NodeId>> orders(g.node_count());
  for (NodeId j = 0; j < g.node_count(); ++j) {
    const auto outs = g.out_neighbors(j);
    orders[j].assign(outs.begin(), outs.end());
  }
  std::map<NodeId, std::map<std::size_t, NodeId>> by_node;
  for (const PriorityEntry& e : entries) {
    if (e.node >= g.node_count()) {
      throw GraphError("priority entry for unknown node " + std::to_string(e.node + 1));
    }
    if (!g.has_edge(e.node, e.neighbor)) {
      throw GraphError("priority entry for node " + std::to_string(e.node + 1) +
                       " names non-out-neighbor " + std::to_string(e.neighbor + 1));
    }
    if (!by_node[e.node].emplace(e.priority, e.neighbor).second) {
      throw GraphError("duplicate priority " + std::to_string(e.priority) + " at node " +
                       std::to_string(e.node + 1));
    }
  }
  for (const auto& [node, slots] : by_node) {
    const std::size_t degree = g.out_degree(node);
    if (slots.size() != degree || slots.rbegin()->first != degree - 1) {
      throw GraphError("priorities of node " + std::to_string(node + 1) +
                       " must be exactly 0.." + std::to_string(degree - 1));
    }
    orders[node].clear();
    for (const auto& [priority, neighbor] : slots) {
      orders[node].push_back(neighbor);
    }
  }
  return PriorityMap::from_orders(g, std::move(orders));
}

}  // namespace qcons
