#include "qcons/engine.hpp"

#include <algorithm>
#include <sstream>

#include "qcons/error.hpp"

namespace qcons {

namespace {

std::string node_label(NodeId id) { return "v" + std::to_string(id + 1); }

Rational mean_estimate(std::span<const NodeState> nodes) {
  Rational sum = 0;
  for (const NodeState& node : nodes) {
    sum += Rational(node.state.y_s, node.state.z_s);
  }
  return nodes.empty() ? sum : Rational(sum / static_cast<long long>(nodes.size()));
}

std::size_t saturating_size(std::uint64_t v) {
  return v > static_cast<std::uint64_t>(SIZE_MAX) ? SIZE_MAX : static_cast<std::size_t>(v);
}

}  // namespace

bool SimState::quiescent() const {
  return in_flight.empty() &&
         std::none_of(nodes.begin(), nodes.end(), [](const NodeState& n) { return n.s_br || n.m_tr; });
}

std::size_t default_max_rounds(std::size_t n, std::size_t m) {
  const std::uint64_t bound = convergence_bound(n, m);
  return saturating_size(bound + 2 * static_cast<std::uint64_t>(n));
}

SimState start_run(std::shared_ptr<const Network> network, std::span<const Integer> initial_values) {
  if (!network) {
    throw ConfigError("start_run: missing network");
  }
  const std::size_t n = network->graph.node_count();
  if (initial_values.size() != n) {
    std::ostringstream msg;
    msg << "expected " << n << " initial values, got " << initial_values.size();
    throw ConfigError(msg.str());
  }
  if (network->priorities.node_count() != n) {
    throw ConfigError("priority map does not match the digraph");
  }
  SimState sim;
  sim.network = std::move(network);
  sim.nodes.reserve(n);
  sim.in_flight.reserve(n);
  sim.traffic.resize(n);
  for (NodeId j = 0; j < n; ++j) {
    auto [node, hello] = init_node(j, initial_values[j]);
    sim.initial_sum += initial_values[j];
    sim.held_mass.push_back(node.mass);
    sim.nodes.push_back(node);
    sim.in_flight.push_back(hello);
    sim.traffic[j].broadcasts = 1;
    sim.traffic[j].link_transmissions = sim.network->graph.out_degree(j);
  }
  sim.cumulative_transmissions = n;
  if (!is_strongly_connected(sim.network->graph)) {
    sim.warnings.emplace_back(
        "digraph is not strongly connected; exact consensus is not guaranteed");
  }
  return sim;
}

SimState step(SimState sim, const TraceSink& trace) {
  const Digraph& g = sim.network->graph;
  const std::size_t n = g.node_count();

  std::vector<Inbox> inboxes(n);
  for (const Message& msg : sim.in_flight) {
    if (msg.kind == MessageKind::broadcast) {
      const auto receivers = g.out_neighbors(msg.sender);
      for (NodeId l : receivers) {
        inboxes[l].states.push_back({msg.y, msg.z});
      }
      if (trace) {
        trace(sim.round, msg, receivers);
      }
    } else {
      const NodeId l = *msg.receiver;
      inboxes[l].masses.push_back({msg.y, msg.z});
      if (trace) {
        trace(sim.round, msg, std::span<const NodeId>(&l, 1));
      }
    }
  }

  RoundMetrics metrics;
  metrics.round = sim.round;
  metrics.delivered = sim.in_flight.size();
  if (!sim.in_flight.empty()) {
    sim.last_delivery_round = sim.round;
  }

  std::vector<Message> outgoing;
  for (NodeId j = 0; j < n; ++j) {
    const Inbox& inbox = inboxes[j];
    NodeTraffic& t = sim.traffic[j];
    t.states_received += inbox.states.size();
    t.masses_received += inbox.masses.size();
    if (!inbox.masses.empty()) {
      ++t.mass_merges;
    }
    auto result = node_round(sim.nodes[j], inbox, sim.network->priorities);
    sim.nodes[j] = result.node;
    sim.held_mass[j] = result.held_mass;
    if (!result.messages.empty()) {
      ++metrics.transmitting_nodes;
    }
    for (Message& msg : result.messages) {
      if (msg.kind == MessageKind::broadcast) {
        ++t.broadcasts;
        t.link_transmissions += g.out_degree(j);
      } else {
        ++t.unicasts;
        ++t.link_transmissions;
      }
      outgoing.push_back(std::move(msg));
    }
  }
  metrics.transmissions = outgoing.size();
  sim.cumulative_transmissions += outgoing.size();
  metrics.cumulative_transmissions = sim.cumulative_transmissions;
  metrics.mean_estimate = mean_estimate(sim.nodes);
  metrics.mean_estimate_real = static_cast<double>(metrics.mean_estimate);

  sim.in_flight = std::move(outgoing);
  sim.last_metrics = std::move(metrics);
  ++sim.round;
  return sim;
}

std::vector<std::string> audit_invariants(const SimState& sim) {
  std::vector<std::string> out;
  const auto at = [&sim](const std::string& what) {
    return "round " + std::to_string(sim.round) + ": " + what;
  };
  const Digraph& g = sim.network->graph;

  WideInteger sum_y = 0;
  WideInteger sum_z = 0;
  Weight leading{0, 0};
  for (const NodeState& node : sim.nodes) {
    const std::string who = node_label(node.id);
    if (node.state.z_s < 1) {
      out.push_back(at(who + " has z_s = " + std::to_string(node.state.z_s) + " < 1"));
    }
    if (node.mass.z < 0 || (node.mass.z == 0 && node.mass.y != 0)) {
      out.push_back(at(who + " holds malformed mass (" + std::to_string(node.mass.y) + ", " +
                       std::to_string(node.mass.z) + ")"));
    }
    if (node.s_br || node.m_tr) {
      out.push_back(at(who + " has a transmission flag left set"));
    }
    sum_y += node.mass.y;
    sum_z += node.mass.z;
    if (!node.mass.empty()) {
      leading = std::max(leading, node.mass.weight());
    }
  }
  for (const Message& msg : sim.in_flight) {
    if (msg.kind != MessageKind::directed) {
      continue;
    }
    if (msg.z <= 0) {
      out.push_back(at("unicast from " + node_label(msg.sender) + " carries z = " +
                       std::to_string(msg.z)));
    }
    if (!msg.receiver || !g.has_edge(msg.sender, *msg.receiver)) {
      out.push_back(at("unicast from " + node_label(msg.sender) + " targets a non-out-neighbor"));
    }
    sum_y += msg.y;
    sum_z += msg.z;
  }
  if (sum_y != sim.initial_sum) {
    out.push_back(at("sum of y is not conserved"));
  }
  if (sum_z != static_cast<WideInteger>(sim.nodes.size())) {
    out.push_back(at("sum of z differs from n"));
  }
  for (const NodeState& node : sim.nodes) {
    if (node.state.weight() > leading) {
      std::ostringstream msg;
      msg << node_label(node.id) << " state (" << node.state.y_s << ", " << node.state.z_s
          << ") exceeds the leading mass (" << leading.y << ", " << leading.z << ")";
      out.push_back(at(msg.str()));
    }
  }
  return out;
}

std::vector<std::string> InvariantAuditor::observe(const SimState& sim) {
  std::vector<std::string> out = audit_invariants(sim);
  const auto at = [&sim](const std::string& what) {
    return "round " + std::to_string(sim.round) + ": " + what;
  };

  Integer max_z = 0;
  Weight leading{0, 0};
  for (const NodeState& node : sim.nodes) {
    max_z = std::max(max_z, node.mass.z);
    if (!node.mass.empty()) {
      leading = std::max(leading, node.mass.weight());
    }
  }
  if (max_z_ && max_z < *max_z_) {
    out.push_back(at("maximum z decreased from " + std::to_string(*max_z_) + " to " +
                     std::to_string(max_z)));
  }
  max_z_ = max_z;

  if (states_.size() == sim.nodes.size()) {
    for (const NodeState& node : sim.nodes) {
      if (node.state.weight() < states_[node.id]) {
        out.push_back(at(node_label(node.id) + " state moved backwards"));
      }
    }
  }
  states_.clear();
  for (const NodeState& node : sim.nodes) {
    states_.push_back(node.state.weight());
  }

  const bool any_unicast = std::any_of(sim.in_flight.begin(), sim.in_flight.end(), [](const Message& m) {
    return m.kind == MessageKind::directed;
  });
  if (only_leading_seen_ && any_unicast) {
    out.push_back(at("mass unicast after every remaining mass was already leading"));
  }
  const bool only_leading =
      !any_unicast && std::all_of(sim.nodes.begin(), sim.nodes.end(), [&](const NodeState& node) {
        return node.mass.empty() || node.mass.weight() == leading;
      });
  only_leading_seen_ = only_leading_seen_ || only_leading;
  return out;
}

const char* to_string(Scenario scenario) {
  switch (scenario) {
    case Scenario::full_mass_summation:
      return "FullMassSummation";
    case Scenario::partial_mass_summation:
      return "PartialMassSummation";
    case Scenario::not_converged:
      break;
  }
  return "NotConverged";
}

RunReport run_until_quiescent(SimState sim, const RunOptions& options) {
  const Digraph& g = sim.network->graph;
  const std::size_t n = g.node_count();
  const std::size_t m = g.edge_count();
  const std::size_t max_rounds = options.max_rounds.value_or(default_max_rounds(n, m));
  const std::size_t confirm_rounds = options.confirm_rounds.value_or(2 * n);

  RunReport report;
  report.node_count = n;
  report.edge_count = m;
  report.max_in_degree = g.max_in_degree();
  report.initial_sum = sim.initial_sum;
  report.warnings = sim.warnings;

  InvariantAuditor auditor;
  const auto audit = [&] {
    if (options.audit) {
      auto found = auditor.observe(sim);
      report.violations.insert(report.violations.end(), found.begin(), found.end());
    }
  };
  audit();

  while (!sim.quiescent()) {
    if (sim.round > max_rounds) {
      std::ostringstream msg;
      msg << "no quiescence within " << max_rounds << " rounds (n=" << n << ", m=" << m << ")";
      throw BoundViolation(msg.str());
    }
    sim = step(std::move(sim), options.trace);
    report.series.push_back(*sim.last_metrics);
    audit();
  }
  report.converged_round = sim.last_delivery_round.value_or(0);

  for (std::size_t i = 0; i < confirm_rounds; ++i) {
    sim = step(std::move(sim), options.trace);
    const RoundMetrics& metrics = *sim.last_metrics;
    if (metrics.delivered != 0 || metrics.transmissions != 0) {
      report.violations.push_back("round " + std::to_string(metrics.round) +
                                  ": traffic after quiescence");
    }
    report.series.push_back(metrics);
    audit();
  }
  report.rounds_executed = sim.round;

  const Integer common_z = sim.nodes.front().state.z_s;
  report.exact_average = std::all_of(sim.nodes.begin(), sim.nodes.end(), [&](const NodeState& node) {
    return static_cast<WideInteger>(node.state.y_s) * static_cast<WideInteger>(n) ==
           static_cast<WideInteger>(node.state.z_s) * sim.initial_sum;
  });
  const bool same_z = std::all_of(sim.nodes.begin(), sim.nodes.end(),
                                  [&](const NodeState& node) { return node.state.z_s == common_z; });
  const auto n_int = static_cast<Integer>(n);
  if (report.exact_average && same_z && common_z >= 1 && n_int % common_z == 0) {
    report.alpha = n_int / common_z;
    report.scenario =
        *report.alpha == 1 ? Scenario::full_mass_summation : Scenario::partial_mass_summation;
  } else if (report.exact_average) {
    report.violations.emplace_back("terminal z_s does not divide n uniformly");
  }

  report.total_transmissions = sim.cumulative_transmissions;
  report.final_nodes = std::move(sim.nodes);
  report.traffic = std::move(sim.traffic);
  report.compliance =
      check_bounds(n, m, report.max_in_degree, report.converged_round, report.final_nodes);
  return report;
}

}  // namespace qcons
