#include "qcons/report.hpp"

#include <iomanip>
#include <ostream>

#include <json.hpp>

namespace qcons {

using nlohmann::ordered_json;

namespace {

// Reference statistics over 1000 random 20-node digraphs with value sum 214.
constexpr double kRefTxMin = 103;
constexpr double kRefTxMax = 368;
constexpr double kRefTxMean = 240.547;
constexpr double kRefRoundsMin = 5;
constexpr double kRefRoundsMax = 209;
constexpr double kRefRoundsMean = 103.875;

const char* mode_name(Mode mode) {
  switch (mode) {
    case Mode::replay_example:
      return "replay";
    case Mode::single:
      return "single";
    case Mode::batch:
      break;
  }
  return "batch";
}

const char* priority_name(PrioritySource p) {
  switch (p) {
    case PrioritySource::by_node_index:
      return "by-index";
    case PrioritySource::seeded_shuffle:
      return "shuffle";
    case PrioritySource::file:
      break;
  }
  return "file";
}

ordered_json config_json(const ExperimentConfig& c) {
  ordered_json j;
  j["mode"] = mode_name(c.mode);
  j["nodes"] = c.node_count;
  j["edge_probability"] = c.edge_probability;
  j["runs"] = c.runs;
  j["seed"] = c.seed;
  j["value_range"] = {c.value_lo, c.value_hi};
  j["value_sum"] = c.value_sum ? ordered_json(*c.value_sum) : ordered_json(nullptr);
  j["per_run_values"] = c.per_run_values;
  j["graph_file"] = c.graph_file ? ordered_json(c.graph_file->string()) : ordered_json(nullptr);
  j["priorities"] = priority_name(c.priorities);
  j["priorities_file"] =
      c.priorities_file ? ordered_json(c.priorities_file->string()) : ordered_json(nullptr);
  j["max_rounds"] = c.max_rounds ? ordered_json(*c.max_rounds) : ordered_json(nullptr);
  j["confirm_rounds"] = c.confirm_rounds ? ordered_json(*c.confirm_rounds) : ordered_json(nullptr);
  j["energy"] = {{"alpha3", c.energy.alpha3},
                 {"alpha4", c.energy.alpha4},
                 {"alpha11", c.energy.alpha11},
                 {"alpha2", c.energy.alpha2},
                 {"distance", c.energy.distance},
                 {"path_loss_exponent", c.energy.path_loss_exponent}};
  return j;
}

ordered_json compliance_json(const ComplianceRecord& c) {
  return {{"convergence_bound", c.convergence_bound},
          {"transmission_bound", c.transmission_bound},
          {"computation_bound", c.computation_bound},
          {"observed_rounds", c.observed_rounds},
          {"max_node_transmissions", c.max_node_transmissions},
          {"max_node_computations", c.max_node_computations},
          {"compliant", c.compliant()},
          {"flags", c.flags}};
}

ordered_json resources_json(const ResourceReport& r) {
  return {{"convergence_bound", r.convergence_bound},
          {"tx_bound", r.tx_bound},
          {"comp_bound", r.comp_bound},
          {"memory_slots", r.memory_slots},
          {"memory_bits", r.memory_bits},
          {"bit_width", r.bit_width},
          {"p_sense", r.p_sense},
          {"p_comp", r.p_comp},
          {"p_trans", r.p_trans},
          {"p_total", r.p_total}};
}

ordered_json report_json(const RunReport& r) {
  ordered_json j;
  j["nodes"] = r.node_count;
  j["edges"] = r.edge_count;
  j["max_in_degree"] = r.max_in_degree;
  j["initial_sum"] = r.initial_sum;
  j["average"] = format_rational(Rational(r.initial_sum, static_cast<long long>(r.node_count)));
  j["converged_round"] = r.converged_round;
  j["rounds_executed"] = r.rounds_executed;
  j["total_transmissions"] = r.total_transmissions;
  j["exact_average"] = r.exact_average;
  j["alpha"] = r.alpha ? ordered_json(*r.alpha) : ordered_json(nullptr);
  j["scenario"] = to_string(r.scenario);

  ordered_json nodes = ordered_json::array();
  for (std::size_t i = 0; i < r.final_nodes.size(); ++i) {
    const NodeState& n = r.final_nodes[i];
    const NodeTraffic& t = r.traffic[i];
    nodes.push_back({{"id", n.id + 1},
                     {"y", n.mass.y},
                     {"z", n.mass.z},
                     {"y_s", n.state.y_s},
                     {"z_s", n.state.z_s},
                     {"q_s", std::to_string(n.state.y_s) + "/" + std::to_string(n.state.z_s)},
                     {"tx_count", n.tx_count},
                     {"comp_count", n.comp_count},
                     {"broadcasts", t.broadcasts},
                     {"unicasts", t.unicasts},
                     {"link_transmissions", t.link_transmissions},
                     {"states_received", t.states_received},
                     {"masses_received", t.masses_received},
                     {"mass_merges", t.mass_merges}});
  }
  j["node_summaries"] = std::move(nodes);

  ordered_json series = ordered_json::array();
  for (const RoundMetrics& m : r.series) {
    series.push_back({{"round", m.round},
                      {"delivered", m.delivered},
                      {"transmissions", m.transmissions},
                      {"transmitting_nodes", m.transmitting_nodes},
                      {"cumulative_transmissions", m.cumulative_transmissions},
                      {"mean_estimate", format_rational(m.mean_estimate)},
                      {"mean_estimate_real", m.mean_estimate_real}});
  }
  j["series"] = std::move(series);
  j["compliance"] = compliance_json(r.compliance);
  j["violations"] = r.violations;
  j["warnings"] = r.warnings;
  return j;
}

ordered_json aggregate_json(const Aggregate& a) {
  return {{"min", a.min}, {"max", a.max}, {"mean", a.mean}};
}

}  // namespace

std::string format_rational(const Rational& value) {
  return boost::multiprecision::numerator(value).str() + "/" +
         boost::multiprecision::denominator(value).str();
}

void write_run_json(std::ostream& out, const SingleRun& run, const ExperimentConfig& config) {
  ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["kind"] = "run";
  j["config"] = config_json(config);
  j["run_seed"] = run.seed;
  j["initial_values"] = run.values;
  j["report"] = report_json(run.report);
  j["resources"] = resources_json(run.resources);
  ordered_json energy = ordered_json::array();
  for (std::size_t i = 0; i < run.energy.size(); ++i) {
    const ObservedEnergy& e = run.energy[i];
    energy.push_back({{"id", i + 1},
                      {"p_sense", e.p_sense},
                      {"p_comp", e.p_comp},
                      {"p_trans", e.p_trans},
                      {"p_total", e.p_total}});
  }
  j["observed_energy"] = std::move(energy);
  out << j.dump(2) << '\n';
}

void write_run_table(std::ostream& out, const SingleRun& run) {
  const RunReport& r = run.report;
  out << "nodes " << r.node_count << ", edges " << r.edge_count << ", sum " << r.initial_sum
      << ", average " << format_rational(Rational(r.initial_sum, static_cast<long long>(r.node_count)))
      << '\n';
  out << "converged at round " << r.converged_round << " (bound " << r.compliance.convergence_bound
      << "), " << r.total_transmissions << " transmissions, scenario " << to_string(r.scenario);
  if (r.alpha) {
    out << ", alpha " << *r.alpha;
  }
  out << '\n';
  out << std::setw(6) << "node" << std::setw(10) << "y" << std::setw(6) << "z" << std::setw(10)
      << "y_s" << std::setw(6) << "z_s" << std::setw(8) << "tx" << std::setw(8) << "comp" << '\n';
  for (const NodeState& n : r.final_nodes) {
    out << std::setw(6) << ("v" + std::to_string(n.id + 1)) << std::setw(10) << n.mass.y
        << std::setw(6) << n.mass.z << std::setw(10) << n.state.y_s << std::setw(6) << n.state.z_s
        << std::setw(8) << n.tx_count << std::setw(8) << n.comp_count << '\n';
  }
  out << "per-node bounds: tx " << r.compliance.transmission_bound << ", comp "
      << r.compliance.computation_bound << "; energy bound " << run.resources.p_total << " nJ\n";
  out << (r.healthy() ? "PASS" : "FAIL") << '\n';
}

void write_series_csv(std::ostream& out, const RunReport& report) {
  out << "round,delivered,transmissions,transmitting_nodes,cumulative_transmissions,"
         "mean_estimate,mean_estimate_real\n";
  for (const RoundMetrics& m : report.series) {
    out << m.round << ',' << m.delivered << ',' << m.transmissions << ',' << m.transmitting_nodes
        << ',' << m.cumulative_transmissions << ',' << format_rational(m.mean_estimate) << ','
        << std::setprecision(17) << m.mean_estimate_real << '\n';
  }
}

void write_batch_json(std::ostream& out, const BatchReport& batch, const ExperimentConfig& config) {
  ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["kind"] = "batch";
  j["config"] = config_json(config);
  j["shared_values"] = batch.shared_values;
  j["total_transmissions"] = aggregate_json(batch.total_transmissions);
  j["convergence_rounds"] = aggregate_json(batch.convergence_rounds);
  j["convergence_bound"] = aggregate_json(batch.convergence_bound);
  j["node_transmission_bound"] = aggregate_json(batch.node_transmission_bound);
  j["reference"] = {
      {"total_transmissions", {{"min", kRefTxMin}, {"max", kRefTxMax}, {"mean", kRefTxMean}}},
      {"convergence_rounds",
       {{"min", kRefRoundsMin}, {"max", kRefRoundsMax}, {"mean", kRefRoundsMean}}}};
  ordered_json runs = ordered_json::array();
  for (const RunSummary& s : batch.runs) {
    runs.push_back({{"index", s.index},
                    {"seed", s.seed},
                    {"nodes", s.node_count},
                    {"edges", s.edge_count},
                    {"converged_round", s.converged_round},
                    {"total_transmissions", s.total_transmissions},
                    {"max_node_transmissions", s.max_node_transmissions},
                    {"max_node_computations", s.max_node_computations},
                    {"convergence_bound", s.convergence_bound},
                    {"transmission_bound", s.transmission_bound},
                    {"computation_bound", s.computation_bound},
                    {"terminal_estimate", format_rational(s.terminal_estimate)},
                    {"alpha", s.alpha ? ordered_json(*s.alpha) : ordered_json(nullptr)},
                    {"scenario", to_string(s.scenario)},
                    {"transmitters_reach_zero", s.transmitters_reach_zero}});
  }
  j["runs"] = std::move(runs);
  ordered_json series = ordered_json::array();
  for (const SeriesPoint& p : batch.series) {
    series.push_back({{"round", p.round},
                      {"mean_estimate", p.mean_estimate},
                      {"mean_cumulative_transmissions", p.mean_cumulative_transmissions},
                      {"mean_transmitting_nodes", p.mean_transmitting_nodes}});
  }
  j["series"] = std::move(series);
  out << j.dump(2) << '\n';
}

void write_batch_table(std::ostream& out, const BatchReport& batch) {
  const auto row = [&out](const char* name, const Aggregate& a, double ref_min, double ref_max,
                          double ref_mean) {
    out << std::left << std::setw(22) << name << std::right << std::setw(10) << a.min
        << std::setw(10) << a.max << std::setw(12) << a.mean << "   | " << std::setw(9) << ref_min
        << std::setw(9) << ref_max << std::setw(10) << ref_mean << '\n';
  };
  out << batch.runs.size() << " runs\n";
  out << std::left << std::setw(22) << "" << std::right << std::setw(10) << "min" << std::setw(10)
      << "max" << std::setw(12) << "mean" << "   | reference min/max/mean\n";
  out << std::fixed << std::setprecision(3);
  row("total transmissions", batch.total_transmissions, kRefTxMin, kRefTxMax, kRefTxMean);
  row("convergence rounds", batch.convergence_rounds, kRefRoundsMin, kRefRoundsMax, kRefRoundsMean);
  out << "mean convergence bound " << batch.convergence_bound.mean
      << ", mean per-node transmission bound " << batch.node_transmission_bound.mean << '\n';
  out.unsetf(std::ios::floatfield);
}

void write_batch_series_csv(std::ostream& out, const BatchReport& batch) {
  out << "round,mean_estimate,mean_cumulative_transmissions,mean_transmitting_nodes\n";
  out << std::setprecision(17);
  for (const SeriesPoint& p : batch.series) {
    out << p.round << ',' << p.mean_estimate << ',' << p.mean_cumulative_transmissions << ','
        << p.mean_transmitting_nodes << '\n';
  }
}

void write_replay_json(std::ostream& out, const ReplayResult& replay) {
  ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["kind"] = "replay";
  j["passed"] = replay.passed;
  j["table_checked"] = replay.table_checked;
  ordered_json rows = ordered_json::array();
  for (const TableRow& r : replay.observed) {
    rows.push_back({{"round", r.round},
                    {"node", r.node + 1},
                    {"y", r.mass.y},
                    {"z", r.mass.z},
                    {"y_s", r.state.y_s},
                    {"z_s", r.state.z_s},
                    {"q_s", std::to_string(r.state.y_s) + "/" + std::to_string(r.state.z_s)}});
  }
  j["table"] = std::move(rows);
  j["diffs"] = replay.diffs;
  j["report"] = report_json(replay.report);
  out << j.dump(2) << '\n';
}

void write_replay_table(std::ostream& out, const ReplayResult& replay) {
  std::size_t round = SIZE_MAX;
  for (const TableRow& r : replay.observed) {
    if (r.round != round) {
      round = r.round;
      out << "k=" << round << "\n  node       y     z     y_s   z_s   q_s\n";
    }
    out << "  v" << r.node + 1 << std::setw(10) << r.mass.y << std::setw(6) << r.mass.z
        << std::setw(8) << r.state.y_s << std::setw(6) << r.state.z_s << "   " << r.state.y_s
        << " / " << r.state.z_s << '\n';
  }
  const RunReport& rep = replay.report;
  out << "quiescent after round " << rep.converged_round << ", scenario " << to_string(rep.scenario);
  if (rep.alpha) {
    out << ", alpha " << *rep.alpha;
  }
  out << '\n' << (replay.passed ? "PASS" : "FAIL") << '\n';
}

TraceSink TraceWriter::sink() {
  return [this](std::size_t round, const Message& message, std::span<const NodeId> receivers) {
    write(round, message, receivers);
  };
}

void TraceWriter::write(std::size_t round, const Message& message, std::span<const NodeId> receivers) {
  ordered_json j;
  j["round"] = round;
  j["kind"] = message.kind == MessageKind::broadcast ? "broadcast" : "directed";
  j["sender"] = message.sender + 1;
  ordered_json to = ordered_json::array();
  for (NodeId l : receivers) {
    to.push_back(l + 1);
  }
  j["receivers"] = std::move(to);
  j["y"] = message.y;
  j["z"] = message.z;
  *out_ << j.dump() << '\n';
}

}  // namespace qcons
