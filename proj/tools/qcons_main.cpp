// qcons: replay the worked example, run one seeded simulation, or run a batch
// campaign of random digraphs.
//
// Exit codes: 0 success, 1 verification failure, 2 configuration error.

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "qcons/error.hpp"
#include "qcons/experiment.hpp"
#include "qcons/graph_io.hpp"
#include "qcons/report.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerification = 1;
constexpr int kExitConfig = 2;

std::vector<qcons::Integer> parse_values(const std::string& text) {
  std::string normalized = text;
  for (char& c : normalized) {
    if (c == ',' || c == ';') {
      c = ' ';
    }
  }
  std::istringstream in(normalized);
  std::vector<qcons::Integer> values;
  std::string token;
  while (in >> token) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size()) {
      throw qcons::ConfigError("not an integer value: '" + token + "'");
    }
    values.push_back(v);
  }
  return values;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw qcons::ConfigError("cannot open " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Writes to `path` or stdout when empty.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) {
        throw qcons::ConfigError("cannot write " + path);
      }
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Event-triggered exact quantized average consensus simulator"};
  app.set_version_flag("--version", "qcons 0.1.0");

  qcons::ExperimentConfig config;
  std::string mode = "single";
  std::string priorities = "by-index";
  std::string values_text;
  std::string values_file;
  std::string graph_file;
  std::string priorities_file;
  std::string trace_path;
  std::string out_path;
  std::string series_path;
  std::string format = "json";
  std::optional<std::pair<qcons::Integer, qcons::Integer>> value_range;
  std::optional<qcons::Integer> value_sum;
  std::optional<std::size_t> max_rounds;
  std::optional<std::size_t> confirm_rounds;

  app.add_option("--mode", mode, "replay | single | batch")
      ->check(CLI::IsMember({"replay", "single", "batch"}))
      ->capture_default_str();
  app.add_option("--nodes", config.node_count, "Number of nodes for random digraphs")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--edge-prob", config.edge_probability, "Directed edge probability in (0, 1]")
      ->capture_default_str();
  app.add_option("--runs", config.runs, "Batch size")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--seed", config.seed, "Base seed")->capture_default_str();
  auto* values_opt = app.add_option("--values", values_text, "Explicit initial values, e.g. 2,4,7,9");
  app.add_option("--values-file", values_file, "File with whitespace/comma separated values")
      ->excludes(values_opt);
  app.add_option("--value-range", value_range, "Range LO HI for drawn values (default 0 20)");
  app.add_option("--value-sum", value_sum, "Pin the network sum of drawn values");
  app.add_flag("--per-run-values", config.per_run_values,
               "Batch: draw fresh values for every run instead of sharing one vector");
  app.add_option("--graph-file", graph_file, "Digraph file (`n`, then `u v` per edge, 1-based)");
  app.add_option("--priorities", priorities, "by-index | shuffle")
      ->check(CLI::IsMember({"by-index", "shuffle"}))
      ->capture_default_str();
  app.add_option("--priorities-file", priorities_file, "Priority file (`j neighbor priority` lines)");
  app.add_option("--max-rounds", max_rounds, "Round cap (default n^2 + (n-1) m^2 + 2n)");
  app.add_option("--confirm-rounds", confirm_rounds, "Silent rounds required after quiescence (default 2n)");
  app.add_option("--trace", trace_path, "Write a per-message JSON-lines trace (single/replay)");
  app.add_option("--out", out_path, "Report destination (default stdout)");
  app.add_option("--format", format, "json | table")
      ->check(CLI::IsMember({"json", "table"}))
      ->capture_default_str();
  app.add_option("--series", series_path, "Write the per-round series as CSV");
  app.add_option("--alpha3", config.energy.alpha3, "Sensing energy, nJ/bit")->capture_default_str();
  app.add_option("--alpha4", config.energy.alpha4, "Processing energy, nJ/bit")->capture_default_str();
  app.add_option("--alpha11", config.energy.alpha11, "Transmit electronics, nJ/bit")->capture_default_str();
  app.add_option("--alpha2", config.energy.alpha2, "Transmit amplifier, nJ/bit")->capture_default_str();
  app.add_option("--distance", config.energy.distance, "Node-to-neighbor distance, m")->capture_default_str();
  app.add_option("--path-loss-exponent", config.energy.path_loss_exponent, "Path-loss exponent")
      ->capture_default_str();
  app.add_option("--threads", config.threads, "Batch worker threads (0: all cores)")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    config.mode = mode == "replay"   ? qcons::Mode::replay_example
                  : mode == "batch" ? qcons::Mode::batch
                                    : qcons::Mode::single;
    config.priorities = priorities == "shuffle" ? qcons::PrioritySource::seeded_shuffle
                                                : qcons::PrioritySource::by_node_index;
    if (!priorities_file.empty()) {
      config.priorities = qcons::PrioritySource::file;
      config.priorities_file = priorities_file;
    }
    if (!graph_file.empty()) {
      config.graph_file = graph_file;
    }
    if (!values_text.empty()) {
      config.values = parse_values(values_text);
    } else if (!values_file.empty()) {
      config.values = parse_values(read_file(values_file));
    }
    if (value_range) {
      config.value_lo = value_range->first;
      config.value_hi = value_range->second;
    }
    config.value_sum = value_sum;
    config.max_rounds = max_rounds;
    config.confirm_rounds = confirm_rounds;
    const bool table = format == "table";

    Output out(out_path);
    std::unique_ptr<std::ofstream> trace_file;
    std::optional<qcons::TraceWriter> tracer;
    if (!trace_path.empty()) {
      trace_file = std::make_unique<std::ofstream>(trace_path);
      if (!*trace_file) {
        throw qcons::ConfigError("cannot write " + trace_path);
      }
      tracer.emplace(*trace_file);
    }

    switch (config.mode) {
      case qcons::Mode::replay_example: {
        qcons::ReplayOptions options;
        if (config.priorities == qcons::PrioritySource::file) {
          options.priorities = qcons::read_priorities_file(*config.priorities_file, qcons::example_digraph());
        }
        if (confirm_rounds) {
          options.confirm_rounds = *confirm_rounds;
        }
        const qcons::ReplayResult replay = qcons::run_replay_example(options);
        if (tracer) {
          // Re-run with tracing; the replay itself is deterministic.
          const auto g = qcons::example_digraph();
          auto network = std::make_shared<const qcons::Network>(qcons::Network{
              g, options.priorities.value_or(qcons::example_priorities(g))});
          qcons::RunOptions run_options;
          run_options.confirm_rounds = options.confirm_rounds;
          run_options.trace = tracer->sink();
          qcons::run_until_quiescent(qcons::start_run(network, qcons::example_values()), run_options);
        }
        if (table) {
          qcons::write_replay_table(out.stream(), replay);
        } else {
          qcons::write_replay_json(out.stream(), replay);
        }
        if (!series_path.empty()) {
          Output series(series_path);
          qcons::write_series_csv(series.stream(), replay.report);
        }
        for (const std::string& diff : replay.diffs) {
          std::cerr << "mismatch: " << diff << '\n';
        }
        return replay.passed ? kExitOk : kExitVerification;
      }
      case qcons::Mode::single: {
        const qcons::SingleRun run =
            qcons::run_single(config, tracer ? tracer->sink() : qcons::TraceSink{});
        if (table) {
          qcons::write_run_table(out.stream(), run);
        } else {
          qcons::write_run_json(out.stream(), run, config);
        }
        if (!series_path.empty()) {
          Output series(series_path);
          qcons::write_series_csv(series.stream(), run.report);
        }
        for (const std::string& w : run.report.warnings) {
          std::cerr << "warning: " << w << '\n';
        }
        for (const std::string& v : run.report.violations) {
          std::cerr << "violation: " << v << '\n';
        }
        for (const std::string& f : run.report.compliance.flags) {
          std::cerr << "bound: " << f << '\n';
        }
        return run.report.healthy() ? kExitOk : kExitVerification;
      }
      case qcons::Mode::batch: {
        if (tracer) {
          throw qcons::ConfigError("--trace is not supported in batch mode");
        }
        const qcons::BatchReport batch = qcons::run_batch(config);
        if (table) {
          qcons::write_batch_table(out.stream(), batch);
        } else {
          qcons::write_batch_json(out.stream(), batch, config);
        }
        if (!series_path.empty()) {
          Output series(series_path);
          qcons::write_batch_series_csv(series.stream(), batch);
        }
        return kExitOk;
      }
    }
  } catch (const qcons::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const qcons::GraphError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const qcons::Error& e) {
    std::cerr << "verification failure: " << e.what() << '\n';
    return kExitVerification;
  }
  return kExitOk;
}
