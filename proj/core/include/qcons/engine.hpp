#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "qcons/bounds.hpp"
#include "qcons/digraph.hpp"
#include "qcons/protocol.hpp"

namespace qcons {

using Rational = boost::multiprecision::cpp_rational;

/// The static part of a run, shared read-only by every round.
struct Network {
  Digraph graph;
  PriorityMap priorities;
};

/// Per-node traffic seen by the engine, beyond what the node itself counts.
struct NodeTraffic {
  std::uint64_t broadcasts = 0;
  std::uint64_t unicasts = 0;
  std::uint64_t link_transmissions = 0;  // broadcast fan-out plus unicasts
  std::uint64_t states_received = 0;
  std::uint64_t masses_received = 0;
  std::uint64_t mass_merges = 0;  // rounds in which at least one mass arrived

  friend bool operator==(const NodeTraffic&, const NodeTraffic&) = default;
};

struct RoundMetrics {
  std::size_t round = 0;
  std::size_t delivered = 0;      // messages consumed in this round
  std::size_t transmissions = 0;  // emission events in this round
  std::size_t transmitting_nodes = 0;
  std::uint64_t cumulative_transmissions = 0;  // includes the initial broadcasts
  Rational mean_estimate;                      // mean of q_s after the round
  double mean_estimate_real = 0.0;
};

struct SimState {
  std::shared_ptr<const Network> network;
  std::size_t round = 0;  // next round to execute
  std::vector<NodeState> nodes;
  std::vector<Message> in_flight;  // consumed by round `round`
  std::vector<MassPair> held_mass;  // last round's post-merge, pre-unicast masses
  std::vector<NodeTraffic> traffic;
  Integer initial_sum = 0;
  std::uint64_t cumulative_transmissions = 0;
  std::optional<std::size_t> last_delivery_round;
  std::optional<RoundMetrics> last_metrics;
  std::vector<std::string> warnings;

  bool quiescent() const;
};

/// Called once per delivered message with the round it is consumed in and the
/// nodes that receive it.
using TraceSink =
    std::function<void(std::size_t round, const Message& message, std::span<const NodeId> receivers)>;

/// Initializes every node and queues the n initial broadcasts for round 0.
/// A digraph that is not strongly connected is accepted with a warning.
/// Throws ConfigError when the value count does not match the node count.
SimState start_run(std::shared_ptr<const Network> network, std::span<const Integer> initial_values);

/// Executes one synchronous round: deliver, run every node on the frozen
/// inboxes, queue the new messages for the next round.
SimState step(SimState sim, const TraceSink& trace = {});

/// Checks that need only the current snapshot: conservation of y and z
/// (in-flight unicasts included), z_s >= 1, mass shape, state dominance by the
/// leading mass, unicast payloads and receivers. Empty on a healthy state.
std::vector<std::string> audit_invariants(const SimState& sim);

/// audit_invariants plus the checks that need history: non-decreasing
/// maximum z, non-decreasing per-node state, and no unicast once every
/// remaining mass is a leading mass.
class InvariantAuditor {
 public:
  std::vector<std::string> observe(const SimState& sim);

 private:
  std::optional<Integer> max_z_;
  std::vector<Weight> states_;
  bool only_leading_seen_ = false;
};

enum class Scenario { full_mass_summation, partial_mass_summation, not_converged };

const char* to_string(Scenario scenario);

struct RunReport {
  std::size_t node_count = 0;
  std::size_t edge_count = 0;
  std::size_t max_in_degree = 0;
  Integer initial_sum = 0;
  std::size_t converged_round = 0;
  std::size_t rounds_executed = 0;
  std::vector<RoundMetrics> series;
  std::vector<NodeState> final_nodes;
  std::vector<NodeTraffic> traffic;
  std::uint64_t total_transmissions = 0;
  bool exact_average = false;
  std::optional<Integer> alpha;
  Scenario scenario = Scenario::not_converged;
  std::vector<std::string> violations;
  std::vector<std::string> warnings;
  ComplianceRecord compliance;

  bool healthy() const { return exact_average && violations.empty() && compliance.compliant(); }
};

struct RunOptions {
  std::optional<std::size_t> max_rounds;      // default n^2 + (n-1) m^2 + 2n
  std::optional<std::size_t> confirm_rounds;  // default 2n
  bool audit = true;
  TraceSink trace;
};

/// Steps until nothing is in flight, then runs the confirmation rounds.
/// Throws BoundViolation if quiescence is not reached within max_rounds.
RunReport run_until_quiescent(SimState sim, const RunOptions& options = {});

std::size_t default_max_rounds(std::size_t n, std::size_t m);

}  // namespace qcons
