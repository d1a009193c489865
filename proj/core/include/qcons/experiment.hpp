#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qcons/analysis.hpp"
#include "qcons/digraph.hpp"
#include "qcons/engine.hpp"
#include "qcons/rng.hpp"

namespace qcons {

// ---------------------------------------------------------------------------
// The four-node worked example (nodes 0..3 are v1..v4).

struct TableRow {
  std::size_t round = 0;
  NodeId node = 0;
  MassPair mass;
  StateTriple state;

  friend bool operator==(const TableRow&, const TableRow&) = default;
};

Digraph example_digraph();
std::vector<Integer> example_values();
/// v1: v4 then v3; v3: v1 then v4.
PriorityMap example_priorities(const Digraph& g);
/// v1 swapped to v3 then v4; ends in a single merged mass.
PriorityMap swapped_example_priorities(const Digraph& g);
/// Mass and state of every node for rounds 0..4 of the example.
std::vector<TableRow> example_table();

struct ReplayOptions {
  std::optional<PriorityMap> priorities;      // default: example_priorities
  std::optional<std::vector<TableRow>> table;  // default: example_table when priorities are default
  std::size_t confirm_rounds = 20;
};

struct ReplayResult {
  bool passed = false;
  bool table_checked = false;
  std::vector<std::string> diffs;
  std::vector<TableRow> observed;  // rounds 0..4
  RunReport report;
};

/// Replays the example and checks every table cell, the terminal state, alpha
/// and silence from round 5 on. With the swapped priorities it checks for a
/// single merged mass (22, 4); with any other priorities only exactness and
/// quiescence are checked.
ReplayResult run_replay_example(const ReplayOptions& options = {});

/// Mass and state for every node, the way the example table lists them: the
/// mass as merged in that round, before any unicast zeroes it.
std::vector<TableRow> snapshot_rows(const SimState& sim);

// ---------------------------------------------------------------------------
// Seeded experiments.

enum class Mode { replay_example, single, batch };
enum class PrioritySource { by_node_index, seeded_shuffle, file };

struct ExperimentConfig {
  Mode mode = Mode::single;
  std::size_t node_count = 20;
  double edge_probability = 0.15;
  std::size_t runs = 1;
  std::uint64_t seed = 1;

  std::vector<Integer> values;  // explicit values; empty means draw at random
  Integer value_lo = 0;
  Integer value_hi = 20;
  std::optional<Integer> value_sum;
  bool per_run_values = false;  // batch: redraw values for every run

  std::optional<std::filesystem::path> graph_file;
  PrioritySource priorities = PrioritySource::by_node_index;
  std::optional<std::filesystem::path> priorities_file;

  std::optional<std::size_t> max_rounds;
  std::optional<std::size_t> confirm_rounds;
  EnergyParams energy;
  std::size_t threads = 0;  // 0: hardware concurrency

  /// Throws ConfigError on an inconsistent configuration.
  void validate() const;
};

/// Draws n values from [lo, hi]. With `sum`, draws n-1 and solves for the
/// last, redrawing until it lands in range. Throws ConfigError if the sum is
/// unreachable.
std::vector<Integer> draw_values(std::size_t n, Integer lo, Integer hi, std::optional<Integer> sum,
                                 Rng& rng);

struct SingleRun {
  std::uint64_t seed = 0;
  std::shared_ptr<const Network> network;
  std::vector<Integer> values;
  RunReport report;
  ResourceReport resources;
  std::vector<ObservedEnergy> energy;
};

/// One seeded run. The digraph comes from config.graph_file or is drawn from
/// G(n, p); values come from config.values or are drawn.
SingleRun run_single(const ExperimentConfig& config, const TraceSink& trace = {});

struct RunSummary {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  std::size_t node_count = 0;
  std::size_t edge_count = 0;
  std::size_t converged_round = 0;
  std::uint64_t total_transmissions = 0;
  std::uint64_t max_node_transmissions = 0;
  std::uint64_t max_node_computations = 0;
  std::uint64_t convergence_bound = 0;
  std::uint64_t transmission_bound = 0;
  std::uint64_t computation_bound = 0;
  Rational terminal_estimate;  // common q_s at quiescence
  std::optional<Integer> alpha;
  Scenario scenario = Scenario::not_converged;
  bool transmitters_reach_zero = false;
};

struct Aggregate {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
};

struct SeriesPoint {
  std::size_t round = 0;
  double mean_estimate = 0.0;
  double mean_cumulative_transmissions = 0.0;
  double mean_transmitting_nodes = 0.0;
};

struct BatchReport {
  std::vector<Integer> shared_values;  // empty with per_run_values
  std::vector<RunSummary> runs;
  Aggregate total_transmissions;
  Aggregate convergence_rounds;
  Aggregate convergence_bound;
  Aggregate node_transmission_bound;
  std::vector<SeriesPoint> series;
};

/// Runs config.runs independent seeded runs on a worker pool and reduces them
/// in run-index order. Throws BoundViolation naming the first failing run if
/// any run is inexact, violates an invariant or exceeds a bound.
BatchReport run_batch(const ExperimentConfig& config);

Aggregate aggregate(std::span<const double> values);

}  // namespace qcons
