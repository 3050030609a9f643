#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "erd/experiment.hpp"

namespace {

// Exit codes: 0 success, 1 a verification assertion failed, 2 bad config.
constexpr int kOk = 0;
constexpr int kAssertionFailed = 1;
constexpr int kConfigError = 2;

int do_run(const std::string& config_path, const erd::RunOptions& opts) {
  erd::ExperimentConfig cfg = erd::load_config(config_path);
  erd::RunOutcome outcome = erd::run_experiment(cfg, opts);
  std::string path = erd::write_outputs(cfg, opts, outcome);
  if (path.empty()) {
    erd::OutputFormat format = cfg.format;
    if (opts.format_override) format = *opts.format_override;
    if (format == erd::OutputFormat::Csv) {
      erd::write_rows_csv(std::cout, outcome.rows);
    } else {
      erd::write_rows_json(std::cout, outcome.rows);
    }
  } else {
    std::cout << "wrote " << outcome.rows.size() << " rows to " << path << "\n";
  }
  for (const auto& [name, ok] : outcome.assertions) {
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << "\n";
  }
  return outcome.passed() ? kOk : kAssertionFailed;
}

int do_validate(const std::string& config_path) {
  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "cannot open config file '" << config_path << "'\n";
    return kConfigError;
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "not valid JSON: " << e.what() << "\n";
    return kConfigError;
  }
  auto errors = erd::validate_config(j);
  if (errors.empty()) {
    std::cout << "valid: " << j.value("experiment", "?") << "\n";
    return kOk;
  }
  for (const auto& e : errors) std::cerr << "error: " << e << "\n";
  return kConfigError;
}

int do_report(const std::string& dir) {
  erd::ConsolidatedReport rep = erd::consolidate(dir);
  if (rep.entries.empty()) {
    std::cout << "no summaries found under " << dir << "\n";
    return kOk;
  }
  for (const auto& e : rep.entries) {
    std::cout << (e.passed ? "[PASS] " : "[FAIL] ") << e.experiment << ": "
              << e.assertion << "\n";
  }
  std::cout << (rep.all_passed ? "all passed" : "failures present") << "\n";
  return rep.all_passed ? kOk : kAssertionFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"encoded recoupling/decoupling simulator"};
  app.require_subcommand(1);

  std::string config_path, output, format, report_dir;
  int jobs = 1;
  std::uint64_t seed = 0;
  bool seed_set = false;

  CLI::App* run = app.add_subcommand("run", "run an experiment config");
  run->add_option("config", config_path, "JSON config file")->required();
  run->add_option("--output", output, "write rows to this file");
  run->add_option("--format", format, "row format")
      ->check(CLI::IsMember({"csv", "json"}));
  run->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  run->add_option("--seed", seed, "override the config seed")
      ->each([&](const std::string&) { seed_set = true; });

  CLI::App* validate = app.add_subcommand("validate", "check a config file");
  validate->add_option("config", config_path, "JSON config file")->required();

  CLI::App* report = app.add_subcommand("report", "consolidate run summaries");
  report->add_option("dir", report_dir, "directory with .summary.json files")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kConfigError;
  }

  try {
    if (run->parsed()) {
      erd::RunOptions opts;
      opts.jobs = jobs;
      if (seed_set) opts.seed_override = seed;
      if (!output.empty()) opts.output_override = output;
      if (!format.empty()) {
        opts.format_override = format == "json" ? erd::OutputFormat::Json
                                                : erd::OutputFormat::Csv;
      }
      return do_run(config_path, opts);
    }
    if (validate->parsed()) return do_validate(config_path);
    if (report->parsed()) return do_report(report_dir);
  } catch (const erd::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kAssertionFailed;
  }
  return kOk;
}
