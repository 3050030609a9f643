#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "erd/sequence.hpp"

namespace erd {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ExperimentKind {
  DephaseDecay,
  DfsStorage,
  ParityKick,
  Block4,
  Leak4,
  Full10,
  WeakGate,
  Euler,
  Offres,
  TauScan,
};

const char* experiment_kind_name(ExperimentKind k);
ExperimentKind parse_experiment_kind(const std::string& name);

enum class OutputFormat { Csv, Json };

struct ExperimentConfig {
  int schema_version = 1;
  ExperimentKind kind = ExperimentKind::DephaseDecay;
  nlohmann::json parameters;
  std::string output_path;  // may be empty: stdout only
  OutputFormat format = OutputFormat::Csv;
};

ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const nlohmann::json& j);
// All validation diagnostics for a raw config document (empty = valid).
std::vector<std::string> validate_config(const nlohmann::json& j);

struct ResultRow {
  std::string experiment;
  long grid_index = 0;
  std::uint64_t seed = 0;
  std::string params;  // canonical "key=value;..." string
  std::string metric;
  double value = 0.0;
};

struct RunOptions {
  int jobs = 1;
  std::optional<std::uint64_t> seed_override;
  std::optional<std::string> output_override;
  std::optional<OutputFormat> format_override;
};

struct RunOutcome {
  std::vector<ResultRow> rows;
  std::vector<std::pair<std::string, bool>> assertions;
  VerificationReport summary;
  bool passed() const;
};

RunOutcome run_experiment(const ExperimentConfig& cfg, const RunOptions& opts = {});

void write_rows_csv(std::ostream& os, const std::vector<ResultRow>& rows);
void write_rows_json(std::ostream& os, const std::vector<ResultRow>& rows);
// Writes the row file per config/options plus `<output>.summary.json`;
// returns the row file path ("" if stdout).
std::string write_outputs(const ExperimentConfig& cfg, const RunOptions& opts,
                          const RunOutcome& outcome);

struct ReportEntry {
  std::string experiment;
  std::string assertion;
  bool passed = false;
};

struct ConsolidatedReport {
  std::vector<ReportEntry> entries;
  bool all_passed = true;
};

// Reads every *.summary.json under dir and consolidates the assertion lines.
ConsolidatedReport consolidate(const std::string& dir);

std::string format_double(double v);  // shortest round-trip-safe decimal, %.17g

}  // namespace erd
