// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "qcons/analysis.hpp"
#include "qcons/experiment.hpp"
#include "qcons/report.hpp"

using namespace qcons;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void fail(const std::string& why) {
    if (ok) {
      detail = why;
    }
    ok = false;
  }
};

int failures = 0;

void criterion(int id, const char* name, double limit_seconds, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out.fail(std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (limit_seconds > 0 && secs > limit_seconds) {
    std::ostringstream msg;
    msg << "took " << secs << " s, limit " << limit_seconds << " s";
    out.fail(msg.str());
  }
  std::printf("[%s] criterion %d: %s (%.3f s)%s%s\n", out.ok ? "PASS" : "FAIL", id, name, secs,
              out.detail.empty() ? "" : " -- ", out.detail.c_str());
  std::fflush(stdout);
  if (!out.ok) {
    ++failures;
  }
}

// The exactness campaign configuration for run i.
ExperimentConfig campaign_config(std::size_t i) {
  static constexpr double kProbabilities[] = {0.15, 0.3, 0.6};
  ExperimentConfig c;
  c.node_count = 3 + i % 18;
  c.edge_probability = kProbabilities[(i / 18) % 3];
  c.seed = 1000 + i;
  c.value_lo = -50;
  c.value_hi = 50;
  c.priorities = PrioritySource::seeded_shuffle;
  return c;
}

constexpr std::size_t kCampaignRuns = 500;

std::vector<SingleRun>& campaign() {
  static std::vector<SingleRun> runs = [] {
    std::vector<SingleRun> out;
    for (std::size_t i = 0; i < kCampaignRuns; ++i) {
      out.push_back(run_single(campaign_config(i)));
    }
    return out;
  }();
  return runs;
}

using Pairs = std::vector<std::pair<std::size_t, std::size_t>>;

Pairs edge_pairs(const Digraph& g) {
  Pairs out;
  for (const Edge& e : g.edges()) {
    out.emplace_back(e.sender, e.receiver);
  }
  return out;
}

std::string where(std::size_t i, const std::string& what) {
  return "run " + std::to_string(i) + ": " + what;
}

Outcome golden_trace() {
  Outcome o;
  const ReplayResult r = run_replay_example();
  if (!r.table_checked) {
    o.fail("table not checked");
  }
  for (const std::string& d : r.diffs) {
    o.fail(d);
  }
  // Independent check of the 20 cells against the array transcription.
  const Digraph g = example_digraph();
  const auto ref = oracle::reference_run(4, edge_pairs(g), {{3, 2}, {0}, {0, 3}, {1}}, {2, 4, 7, 9}, 100);
  const auto table = example_table();
  for (const TableRow& row : table) {
    const auto& c = ref.rows.at(row.round).at(row.node);
    if (row.mass != MassPair{c[0], c[1]} || row.state != StateTriple{c[2], c[3]}) {
      o.fail("reference disagrees with the table at k=" + std::to_string(row.round));
    }
  }
  for (const NodeState& n : r.report.final_nodes) {
    if (n.state != StateTriple{11, 2}) {
      o.fail("terminal state is not 11/2");
    }
  }
  if (r.report.converged_round >= 5) {
    o.fail("messages delivered at k >= 5");
  }
  if (r.report.rounds_executed < r.report.converged_round + 1 + 20) {
    o.fail("fewer than 20 confirm rounds");
  }
  return o;
}

Outcome remark_variant() {
  Outcome o;
  ReplayOptions opts;
  opts.priorities = swapped_example_priorities(example_digraph());
  const ReplayResult r = run_replay_example(opts);
  for (const std::string& d : r.diffs) {
    o.fail(d);
  }
  if (r.report.scenario != Scenario::full_mass_summation || r.report.alpha != Integer{1}) {
    o.fail("not full mass summation");
  }
  for (const NodeState& n : r.report.final_nodes) {
    if (n.state != StateTriple{22, 4}) {
      o.fail("terminal state is not (22, 4)");
    }
  }
  return o;
}

Outcome exactness() {
  Outcome o;
  const auto& runs = campaign();
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const SingleRun& run = runs[i];
    const auto n = static_cast<WideInteger>(run.values.size());
    const WideInteger sum = std::accumulate(run.values.begin(), run.values.end(), WideInteger{0});
    for (const NodeState& node : run.report.final_nodes) {
      if (static_cast<WideInteger>(node.state.y_s) * n != static_cast<WideInteger>(node.state.z_s) * sum) {
        o.fail(where(i, "inexact terminal state"));
      }
      if (node.state.z_s < 1 || n % node.state.z_s != 0) {
        o.fail(where(i, "z_s does not divide n"));
      }
    }
    if (!run.report.alpha || *run.report.alpha < 1) {
      o.fail(where(i, "no integer alpha"));
    }
    const auto& g = run.network->graph;
    if (!oracle::strongly_connected_closure(g.node_count(), edge_pairs(g))) {
      o.fail(where(i, "digraph is not strongly connected"));
    }
    std::vector<std::vector<std::size_t>> order(g.node_count());
    for (NodeId j = 0; j < g.node_count(); ++j) {
      const auto ord = run.network->priorities.order(j);
      order[j].assign(ord.begin(), ord.end());
    }
    const auto ref = oracle::reference_run(g.node_count(), edge_pairs(g), order, run.values, 1'000'000);
    for (NodeId j = 0; j < g.node_count(); ++j) {
      const auto& t = ref.terminal[j];
      if (run.report.final_nodes[j].state != StateTriple{t[2], t[3]}) {
        o.fail(where(i, "terminal state differs from the reference"));
      }
    }
  }
  return o;
}

Outcome bounds() {
  Outcome o;
  const auto& runs = campaign();
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const SingleRun& run = runs[i];
    const Digraph& g = run.network->graph;
    const std::uint64_t n = g.node_count();
    const std::uint64_t m = g.edge_count();
    const std::uint64_t d = g.max_in_degree();
    if (run.report.converged_round > n * n + (n - 1) * m * m) {
      o.fail(where(i, "convergence bound exceeded"));
    }
    for (const NodeState& node : run.report.final_nodes) {
      if (node.tx_count > n + (n - 1) * m) {
        o.fail(where(i, "transmission bound exceeded"));
      }
      if (node.comp_count > 1 + (n - 1) * (m + 1 + d)) {
        o.fail(where(i, "computation bound exceeded"));
      }
    }
    for (const std::string& f : run.report.compliance.flags) {
      o.fail(where(i, f));
    }
  }
  return o;
}

Outcome invariants() {
  Outcome o;
  const auto& runs = campaign();
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const SingleRun& run = runs[i];
    for (const std::string& v : run.report.violations) {
      o.fail(where(i, v));
    }
    // Our own per-round pass, independent of the engine's auditor.
    const std::size_t n = run.values.size();
    const Integer sum = std::accumulate(run.values.begin(), run.values.end(), Integer{0});
    SimState sim = start_run(run.network, run.values);
    Integer max_z = 1;
    std::size_t quiet_rounds = 0;
    while (quiet_rounds < 2 * n) {
      sim = step(std::move(sim));
      if (sim.round > 1'000'000) {
        o.fail(where(i, "did not go quiet"));
        break;
      }
      Integer ys = 0;
      Integer zs = 0;
      Integer round_max_z = 0;
      std::pair<Integer, Integer> leading{0, 0};  // (z, y)
      for (const NodeState& node : sim.nodes) {
        ys += node.mass.y;
        zs += node.mass.z;
        round_max_z = std::max(round_max_z, node.mass.z);
        if (node.mass.z > 0) {
          leading = std::max(leading, std::make_pair(node.mass.z, node.mass.y));
        }
      }
      for (const Message& msg : sim.in_flight) {
        if (msg.kind == MessageKind::directed) {
          ys += msg.y;
          zs += msg.z;
          if (msg.z == 0) {
            o.fail(where(i, "directed message with z = 0"));
          }
        }
      }
      if (ys != sum || zs != static_cast<Integer>(n)) {
        o.fail(where(i, "mass not conserved at round " + std::to_string(sim.round)));
      }
      if (round_max_z < max_z) {
        o.fail(where(i, "max z decreased"));
      }
      max_z = round_max_z;
      for (const NodeState& node : sim.nodes) {
        if (std::make_pair(node.state.z_s, node.state.y_s) > leading) {
          o.fail(where(i, "state exceeds the leading mass"));
        }
      }
      if (sim.quiescent()) {
        ++quiet_rounds;
        if (sim.last_metrics->delivered != 0 && quiet_rounds > 1) {
          o.fail(where(i, "delivery during silence"));
        }
      } else if (quiet_rounds > 0) {
        o.fail(where(i, "traffic resumed after quiescence"));
        break;
      }
    }
  }
  return o;
}

Outcome resources() {
  Outcome o;
  if (memory_requirement(4, 2, 22) != MemoryRequirement{15, 51}) {
    o.fail("memory fixture");
  }
  const ResourceReport r = energy_total(example_digraph(), example_values(), EnergyParams{});
  if (r.bit_width != 7) {
    o.fail("A != 7");
  }
  // Defaults are integers and A = 7, so the doubles are exact here.
  if (r.p_sense != 9450.0 || r.p_comp != 945.0 || r.p_trans != 26460.0 || r.p_total != 36855.0) {
    std::ostringstream msg;
    msg << "energy " << r.p_sense << " / " << r.p_comp << " / " << r.p_trans << " / " << r.p_total;
    o.fail(msg.str());
  }
  return o;
}

Outcome statistics() {
  Outcome o;
  ExperimentConfig c;
  c.mode = Mode::batch;
  c.node_count = 20;
  c.runs = 1000;
  c.seed = 2024;
  c.value_sum = 214;
  const BatchReport b = run_batch(c);
  if (b.runs.size() != 1000) {
    o.fail("wrong run count");
  }
  double max_tx = 0;
  double tx_bound = 0;
  for (const RunSummary& s : b.runs) {
    if (s.terminal_estimate != Rational(214, 20)) {
      o.fail(where(s.index, "terminal estimate is not 214/20"));
    }
    if (!s.transmitters_reach_zero) {
      o.fail(where(s.index, "transmitting nodes never reach zero"));
    }
    max_tx += static_cast<double>(s.max_node_transmissions);
    tx_bound += static_cast<double>(s.transmission_bound);
  }
  if (10.0 * b.convergence_rounds.mean > b.convergence_bound.mean) {
    o.fail("mean rounds within 10x of the convergence bound");
  }
  if (10.0 * max_tx > tx_bound) {
    o.fail("mean per-node transmissions within 10x of the bound");
  }
  if (10.0 * b.total_transmissions.mean > 20.0 * b.node_transmission_bound.mean) {
    o.fail("mean total transmissions within 10x of n times the per-node bound");
  }
  std::ostringstream msg;
  msg << "mean tx " << b.total_transmissions.mean << ", mean rounds " << b.convergence_rounds.mean;
  if (o.ok) {
    o.detail = msg.str();
  }
  return o;
}

std::string run_artifacts(const ExperimentConfig& c) {
  std::ostringstream trace;
  TraceWriter writer(trace);
  const SingleRun run = run_single(c, writer.sink());
  std::ostringstream report;
  write_run_json(report, run, c);
  write_series_csv(report, run.report);
  return report.str() + trace.str();
}

Outcome determinism() {
  Outcome o;
  for (std::size_t i = 0; i < kCampaignRuns; ++i) {
    const ExperimentConfig c = campaign_config(i);
    if (run_artifacts(c) != run_artifacts(c)) {
      o.fail(where(i, "artifacts differ"));
    }
  }
  return o;
}

}  // namespace

int main() {
  criterion(1, "golden trace of the four-node example", 1.0, golden_trace);
  criterion(2, "swapped priorities give full mass summation", 1.0, remark_variant);
  criterion(3, "exactness over 500 random digraphs", 60.0, exactness);
  criterion(4, "convergence, transmission and computation bounds", 0.0, bounds);
  criterion(5, "per-round invariants and post-quiescence silence", 0.0, invariants);
  criterion(6, "memory and energy fixtures", 0.0, resources);
  criterion(7, "1000-run statistics at n = 20, sum 214", 300.0, statistics);
  criterion(8, "byte-identical reports and traces", 0.0, determinism);
  std::printf("%s: %d failing criteria\n", failures == 0 ? "PASS" : "FAIL", failures);
  return failures == 0 ? 0 : 1;
}
