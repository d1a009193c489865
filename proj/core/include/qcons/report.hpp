#pragma once

#include <iosfwd>
#include <string>

#include "qcons/engine.hpp"
#include "qcons/experiment.hpp"

namespace qcons {

inline constexpr int kReportSchemaVersion = 1;

/// "num/den" in lowest terms.
std::string format_rational(const Rational& value);

// Structured reports are JSON objects with a mandatory "schema_version".
// Node ids are 1-based in every emitted file.
void write_run_json(std::ostream& out, const SingleRun& run, const ExperimentConfig& config);
void write_run_table(std::ostream& out, const SingleRun& run);
void write_series_csv(std::ostream& out, const RunReport& report);

void write_batch_json(std::ostream& out, const BatchReport& batch, const ExperimentConfig& config);
void write_batch_table(std::ostream& out, const BatchReport& batch);
void write_batch_series_csv(std::ostream& out, const BatchReport& batch);

void write_replay_json(std::ostream& out, const ReplayResult& replay);
void write_replay_table(std::ostream& out, const ReplayResult& replay);

/// Line-delimited JSON trace: one object per delivered message with
/// round, kind, sender, receivers, y and z.
class TraceWriter {
 public:
  explicit TraceWriter(std::ostream& out) : out_(&out) {}

  TraceSink sink();
  void write(std::size_t round, const Message& message, std::span<const NodeId> receivers);

 private:
  std::ostream* out_;
};

}  // namespace qcons
