#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qcons/protocol.hpp"

namespace qcons {

/// Worst-case rounds until every node holds the exact average: n^2 + (n-1) m^2.
std::uint64_t convergence_bound(std::uint64_t n, std::uint64_t m);

/// Worst-case transmissions per node: n + (n-1) m.
std::uint64_t transmission_bound(std::uint64_t n, std::uint64_t m);

/// Worst-case condition evaluations per node: 1 + (n-1)(m + 1 + max in-degree).
std::uint64_t computation_bound(std::uint64_t n, std::uint64_t m, std::uint64_t max_in_degree);

/// Observed run quantities checked against the three bounds above.
struct ComplianceRecord {
  std::uint64_t convergence_bound = 0;
  std::uint64_t transmission_bound = 0;
  std::uint64_t computation_bound = 0;
  std::uint64_t observed_rounds = 0;
  std::uint64_t max_node_transmissions = 0;
  std::uint64_t max_node_computations = 0;
  std::vector<std::string> flags;

  bool compliant() const { return flags.empty(); }
};

ComplianceRecord check_bounds(std::size_t n, std::size_t m, std::size_t max_in_degree,
                              std::size_t converged_round, std::span<const NodeState> nodes);

}  // namespace qcons
