#include "qcons/experiment.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <exception>
#include <sstream>
#include <thread>

#include "qcons/error.hpp"
#include "qcons/graph_io.hpp"

namespace qcons {

namespace {

constexpr std::size_t kTableRounds = 5;

std::string describe(const TableRow& row) {
  std::ostringstream out;
  out << "(y=" << row.mass.y << ", z=" << row.mass.z << ", y_s=" << row.state.y_s
      << ", z_s=" << row.state.z_s << ")";
  return out.str();
}

void check_terminal(const RunReport& report, const StateTriple& expected, Integer alpha,
                    std::vector<std::string>& diffs) {
  for (const NodeState& node : report.final_nodes) {
    if (node.state != expected) {
      std::ostringstream msg;
      msg << "v" << node.id + 1 << " terminal state (" << node.state.y_s << ", " << node.state.z_s
          << "), expected (" << expected.y_s << ", " << expected.z_s << ")";
      diffs.push_back(msg.str());
    }
  }
  if (report.alpha != alpha) {
    diffs.push_back("alpha " + (report.alpha ? std::to_string(*report.alpha) : std::string("none")) +
                    ", expected " + std::to_string(alpha));
  }
}

}  // namespace

Digraph example_digraph() {
  const std::array<Edge, 6> edges{{{0, 2}, {0, 3}, {1, 0}, {2, 0}, {2, 3}, {3, 1}}};
  return Digraph::build(4, edges);
}

std::vector<Integer> example_values() { return {2, 4, 7, 9}; }

PriorityMap example_priorities(const Digraph& g) {
  return PriorityMap::from_orders(g, {{3, 2}, {0}, {0, 3}, {1}});
}

PriorityMap swapped_example_priorities(const Digraph& g) {
  return PriorityMap::from_orders(g, {{2, 3}, {0}, {0, 3}, {1}});
}

std::vector<TableRow> example_table() {
  // {y, z, y_s, z_s} per node, per round.
  constexpr std::array<std::array<std::array<Integer, 4>, 4>, kTableRounds> cells{{
      {{{2, 1, 2, 1}, {4, 1, 4, 1}, {7, 1, 7, 1}, {9, 1, 9, 1}}},
      {{{2, 1, 7, 1}, {4, 1, 9, 1}, {7, 1, 7, 1}, {9, 1, 9, 1}}},
      {{{4, 1, 9, 1}, {0, 0, 9, 1}, {7, 1, 7, 1}, {11, 2, 11, 2}}},
      {{{0, 0, 9, 1}, {0, 0, 11, 2}, {11, 2, 11, 2}, {11, 2, 11, 2}}},
      {{{0, 0, 11, 2}, {0, 0, 11, 2}, {11, 2, 11, 2}, {11, 2, 11, 2}}},
  }};
  std::vector<TableRow> rows;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    for (NodeId j = 0; j < cells[k].size(); ++j) {
      const auto& c = cells[k][j];
      rows.push_back({k, j, {c[0], c[1]}, {c[2], c[3]}});
    }
  }
  return rows;
}

std::vector<TableRow> snapshot_rows(const SimState& sim) {
  std::vector<TableRow> rows;
  rows.reserve(sim.nodes.size());
  for (const NodeState& node : sim.nodes) {
    rows.push_back({sim.round, node.id, sim.held_mass[node.id], node.state});
  }
  return rows;
}

ReplayResult run_replay_example(const ReplayOptions& options) {
  const Digraph g = example_digraph();
  const PriorityMap defaults = example_priorities(g);
  const PriorityMap priorities = options.priorities.value_or(defaults);
  const bool default_priorities = priorities == defaults;
  const bool swapped = priorities == swapped_example_priorities(g);

  auto network = std::make_shared<const Network>(Network{g, priorities});
  const auto values = example_values();

  ReplayResult result;
  SimState sim = start_run(network, values);
  for (std::size_t k = 0; k < kTableRounds; ++k) {
    if (k > 0) {
      sim = step(std::move(sim));
    }
    const auto rows = snapshot_rows(sim);
    result.observed.insert(result.observed.end(), rows.begin(), rows.end());
  }

  std::optional<std::vector<TableRow>> expected = options.table;
  if (!expected && default_priorities) {
    expected = example_table();
  }
  if (expected) {
    result.table_checked = true;
    for (const TableRow& want : *expected) {
      const auto it = std::find_if(result.observed.begin(), result.observed.end(), [&](const TableRow& r) {
        return r.round == want.round && r.node == want.node;
      });
      if (it == result.observed.end()) {
        result.diffs.push_back("k=" + std::to_string(want.round) + " v" +
                               std::to_string(want.node + 1) + ": no observation");
      } else if (*it != want) {
        result.diffs.push_back("k=" + std::to_string(want.round) + " v" +
                               std::to_string(want.node + 1) + ": observed " + describe(*it) +
                               ", expected " + describe(want));
      }
    }
  }

  RunOptions run_options;
  run_options.confirm_rounds = options.confirm_rounds;
  result.report = run_until_quiescent(start_run(network, values), run_options);
  const RunReport& report = result.report;

  if (!report.exact_average) {
    result.diffs.emplace_back("terminal states are not the exact average 22/4");
  }
  for (const std::string& v : report.violations) {
    result.diffs.push_back("invariant: " + v);
  }
  for (const std::string& f : report.compliance.flags) {
    result.diffs.push_back("bound: " + f);
  }
  if (default_priorities) {
    check_terminal(report, {11, 2}, 2, result.diffs);
    if (report.converged_round >= kTableRounds) {
      result.diffs.push_back("messages still delivered at round " +
                             std::to_string(report.converged_round));
    }
  } else if (swapped) {
    check_terminal(report, {22, 4}, 1, result.diffs);
  }
  result.passed = result.diffs.empty();
  return result;
}

void ExperimentConfig::validate() const {
  if (node_count < 1) {
    throw ConfigError("node count must be at least 1");
  }
  if (runs < 1) {
    throw ConfigError("runs must be at least 1");
  }
  if (value_lo > value_hi) {
    throw ConfigError("value range is empty (lo > hi)");
  }
  if (!graph_file && node_count >= 2 && !(edge_probability > 0.0 && edge_probability <= 1.0)) {
    throw ConfigError("edge probability must lie in (0, 1]");
  }
  if (priorities == PrioritySource::file && !priorities_file) {
    throw ConfigError("priority source 'file' needs a priorities file");
  }
  if (mode == Mode::batch && graph_file) {
    throw ConfigError("batch mode draws its own digraphs; a graph file is not allowed");
  }
  if (!values.empty() && !graph_file && values.size() != node_count) {
    throw ConfigError("expected " + std::to_string(node_count) + " values, got " +
                      std::to_string(values.size()));
  }
  energy.validate();
}

std::vector<Integer> draw_values(std::size_t n, Integer lo, Integer hi, std::optional<Integer> sum,
                                 Rng& rng) {
  if (lo > hi) {
    throw ConfigError("value range is empty (lo > hi)");
  }
  std::vector<Integer> values(n);
  if (!sum) {
    for (Integer& v : values) {
      v = rng.between(lo, hi);
    }
    return values;
  }
  if (n == 0) {
    throw ConfigError("cannot pin the sum of zero values");
  }
  const auto count = static_cast<WideInteger>(n);
  if (*sum < count * lo || *sum > count * hi) {
    std::ostringstream msg;
    msg << "sum " << *sum << " is unreachable with " << n << " values in [" << lo << ", " << hi
        << "]";
    throw ConfigError(msg.str());
  }
  constexpr int kAttempts = 100'000;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    WideInteger partial = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      values[i] = rng.between(lo, hi);
      partial += values[i];
    }
    const WideInteger last = *sum - partial;
    if (last >= lo && last <= hi) {
      values[n - 1] = static_cast<Integer>(last);
      return values;
    }
  }
  throw ConfigError("could not draw values with the requested sum; widen the value range");
}

namespace {

struct RunInputs {
  std::shared_ptr<const Network> network;
  std::vector<Integer> values;
};

PriorityMap make_priorities(const ExperimentConfig& config, const Digraph& g, std::uint64_t seed) {
  switch (config.priorities) {
    case PrioritySource::by_node_index:
      return assign_priorities(g, PriorityStrategy::by_node_index);
    case PrioritySource::seeded_shuffle:
      return assign_priorities(g, PriorityStrategy::seeded_shuffle, seed);
    case PrioritySource::file:
      break;
  }
  return read_priorities_file(*config.priorities_file, g);
}

RunInputs make_inputs(const ExperimentConfig& config, std::uint64_t run_seed,
                      const std::vector<Integer>* shared_values) {
  Digraph g = [&] {
    if (config.graph_file) {
      return read_graph_file(*config.graph_file);
    }
    if (config.node_count == 1) {
      return Digraph::build(1, {});
    }
    return generate_random_strongly_connected(config.node_count, config.edge_probability,
                                              derive_seed(run_seed, 0));
  }();
  PriorityMap priorities = make_priorities(config, g, derive_seed(run_seed, 1));

  std::vector<Integer> values;
  if (!config.values.empty()) {
    values = config.values;
  } else if (shared_values != nullptr) {
    values = *shared_values;
  } else {
    Rng rng(derive_seed(run_seed, 2));
    values = draw_values(g.node_count(), config.value_lo, config.value_hi, config.value_sum, rng);
  }
  if (values.size() != g.node_count()) {
    throw ConfigError("expected " + std::to_string(g.node_count()) + " values, got " +
                      std::to_string(values.size()));
  }
  return {std::make_shared<const Network>(Network{std::move(g), std::move(priorities)}),
          std::move(values)};
}

SingleRun execute(const ExperimentConfig& config, std::uint64_t run_seed,
                  const std::vector<Integer>* shared_values, const TraceSink& trace) {
  auto [network, values] = make_inputs(config, run_seed, shared_values);
  RunOptions options;
  options.max_rounds = config.max_rounds;
  options.confirm_rounds = config.confirm_rounds;
  options.trace = trace;

  SingleRun run;
  run.seed = run_seed;
  run.report = run_until_quiescent(start_run(network, values), options);
  run.report.compliance = compare_run(run.report, network->graph, config.energy);
  run.resources = energy_total(network->graph, values, config.energy);
  run.energy = observed_energy(run.report, run.resources.bit_width, config.energy);
  run.network = std::move(network);
  run.values = std::move(values);
  return run;
}

}  // namespace

SingleRun run_single(const ExperimentConfig& config, const TraceSink& trace) {
  config.validate();
  return execute(config, config.seed, nullptr, trace);
}

Aggregate aggregate(std::span<const double> values) {
  Aggregate out;
  if (values.empty()) {
    return out;
  }
  out.min = *std::min_element(values.begin(), values.end());
  out.max = *std::max_element(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) {
    sum += v;
  }
  out.mean = std::clamp(sum / static_cast<double>(values.size()), out.min, out.max);
  return out;
}

BatchReport run_batch(const ExperimentConfig& config) {
  config.validate();
  BatchReport batch;
  if (config.values.empty() && !config.per_run_values) {
    Rng rng(derive_seed(config.seed, 0xFFFF'FFFFULL));
    batch.shared_values =
        draw_values(config.node_count, config.value_lo, config.value_hi, config.value_sum, rng);
  }
  const std::vector<Integer>* shared = batch.shared_values.empty() ? nullptr : &batch.shared_values;

  struct Slot {
    std::optional<RunSummary> summary;
    std::vector<RoundMetrics> series;
    std::exception_ptr error;
    std::string failure;
  };
  std::vector<Slot> slots(config.runs);
  std::atomic<std::size_t> next{0};

  const auto worker = [&] {
    for (std::size_t i = next++; i < config.runs; i = next++) {
      Slot& slot = slots[i];
      try {
        const std::uint64_t run_seed = derive_seed(config.seed, i);
        SingleRun run = execute(config, run_seed, shared, {});
        const RunReport& r = run.report;
        if (!r.healthy()) {
          std::ostringstream msg;
          msg << "run " << i << " (seed " << run_seed << ") failed verification:";
          if (!r.exact_average) {
            msg << " inexact terminal states;";
          }
          for (const auto& v : r.violations) {
            msg << ' ' << v << ';';
          }
          for (const auto& f : r.compliance.flags) {
            msg << ' ' << f << ';';
          }
          slot.failure = msg.str();
          continue;
        }
        RunSummary s;
        s.index = i;
        s.seed = run_seed;
        s.node_count = r.node_count;
        s.edge_count = r.edge_count;
        s.converged_round = r.converged_round;
        s.total_transmissions = r.total_transmissions;
        s.max_node_transmissions = r.compliance.max_node_transmissions;
        s.max_node_computations = r.compliance.max_node_computations;
        s.convergence_bound = r.compliance.convergence_bound;
        s.transmission_bound = r.compliance.transmission_bound;
        s.computation_bound = r.compliance.computation_bound;
        s.terminal_estimate =
            Rational(r.final_nodes.front().state.y_s, r.final_nodes.front().state.z_s);
        s.alpha = r.alpha;
        s.scenario = r.scenario;
        s.transmitters_reach_zero =
            !r.series.empty() && r.series.back().transmitting_nodes == 0 &&
            std::all_of(r.series.begin() + static_cast<std::ptrdiff_t>(std::min(r.converged_round, r.series.size())),
                        r.series.end(),
                        [](const RoundMetrics& m) { return m.transmitting_nodes == 0; });
        slot.summary = s;
        slot.series = r.series;
      } catch (...) {
        slot.error = std::current_exception();
      }
    }
  };

  std::size_t threads = config.threads != 0 ? config.threads : std::thread::hardware_concurrency();
  threads = std::clamp<std::size_t>(threads, 1, config.runs);
  std::vector<std::thread> pool;
  pool.reserve(threads - 1);
  for (std::size_t t = 1; t < threads; ++t) {
    pool.emplace_back(worker);
  }
  worker();
  for (auto& th : pool) {
    th.join();
  }

  for (Slot& slot : slots) {
    if (slot.error) {
      std::rethrow_exception(slot.error);
    }
    if (!slot.failure.empty()) {
      throw BoundViolation(slot.failure);
    }
  }

  std::vector<double> tx;
  std::vector<double> rounds;
  std::vector<double> conv_bound;
  std::vector<double> tx_bound;
  std::size_t longest = 0;
  for (const Slot& slot : slots) {
    const RunSummary& s = *slot.summary;
    batch.runs.push_back(s);
    tx.push_back(static_cast<double>(s.total_transmissions));
    rounds.push_back(static_cast<double>(s.converged_round));
    conv_bound.push_back(static_cast<double>(s.convergence_bound));
    tx_bound.push_back(static_cast<double>(s.transmission_bound));
    longest = std::max(longest, slot.series.size());
  }
  batch.total_transmissions = aggregate(tx);
  batch.convergence_rounds = aggregate(rounds);
  batch.convergence_bound = aggregate(conv_bound);
  batch.node_transmission_bound = aggregate(tx_bound);

  // Runs that finished early hold their last value (and zero transmitters).
  const auto count = static_cast<double>(slots.size());
  batch.series.resize(longest);
  for (std::size_t k = 0; k < longest; ++k) {
    SeriesPoint& p = batch.series[k];
    p.round = k;
    for (const Slot& slot : slots) {
      if (slot.series.empty()) {
        continue;
      }
      const RoundMetrics& m = slot.series[std::min(k, slot.series.size() - 1)];
      p.mean_estimate += m.mean_estimate_real;
      p.mean_cumulative_transmissions += static_cast<double>(m.cumulative_transmissions);
      if (k < slot.series.size()) {
        p.mean_transmitting_nodes += static_cast<double>(m.transmitting_nodes);
      }
    }
    p.mean_estimate /= count;
    p.mean_cumulative_transmissions /= count;
    p.mean_transmitting_nodes /= count;
  }
  return batch;
}

}  // namespace qcons
