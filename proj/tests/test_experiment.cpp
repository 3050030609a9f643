#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "erd/experiment.hpp"

using namespace erd;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json valid_dephase() {
  return json{{"schema_version", 1},
              {"experiment", "dephase-decay"},
              {"parameters", {{"alphas", {0.1, 0.5}}}}};
}

bool has_error_containing(const std::vector<std::string>& errs,
                          const std::string& needle) {
  return std::any_of(errs.begin(), errs.end(), [&](const std::string& e) {
    return e.find(needle) != std::string::npos;
  });
}

std::string rows_as_csv(const std::vector<ResultRow>& rows) {
  std::ostringstream os;
  write_rows_csv(os, rows);
  return os.str();
}

fs::path fresh_work_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("experiment kind names round-trip") {
  for (const char* name : {"dephase-decay", "dfs-storage", "parity-kick",
                           "block4", "leak4", "full10", "weak-gate", "euler",
                           "offres", "tau-scan"}) {
    ExperimentKind k = parse_experiment_kind(name);
    CHECK(std::string(experiment_kind_name(k)) == name);
  }
  CHECK_THROWS_AS(parse_experiment_kind("frobnicate"), ConfigError);
}

TEST_CASE("validate_config accepts a complete document") {
  CHECK(validate_config(valid_dephase()).empty());

  json j = {{"schema_version", 1},
            {"experiment", "parity-kick"},
            {"parameters",
             {{"taus", {0.1, 1.0}}, {"seed", 42}, {"bath_dim", 2},
              {"norm_bound", 0.5}}},
            {"output", "rows.csv"},
            {"format", "json"}};
  CHECK(validate_config(j).empty());
}

TEST_CASE("validate_config reports every problem it can see") {
  SUBCASE("top level must be an object") {
    auto errs = validate_config(json::array({1, 2}));
    REQUIRE(errs.size() == 1);
    CHECK(has_error_containing(errs, "top level"));
  }
  SUBCASE("schema_version must be 1") {
    json j = valid_dephase();
    j["schema_version"] = 2;
    CHECK(has_error_containing(validate_config(j), "schema_version"));
    j.erase("schema_version");
    CHECK(has_error_containing(validate_config(j), "schema_version"));
  }
  SUBCASE("experiment key is required") {
    json j = valid_dephase();
    j.erase("experiment");
    CHECK(has_error_containing(validate_config(j), "experiment"));
    j["experiment"] = "no-such-thing";
    CHECK(has_error_containing(validate_config(j), "unknown kind"));
  }
  SUBCASE("unknown keys are flagged at both levels") {
    json j = valid_dephase();
    j["extra"] = true;
    j["parameters"]["bogus"] = 3;
    auto errs = validate_config(j);
    CHECK(has_error_containing(errs, "extra: unknown top-level key"));
    CHECK(has_error_containing(errs, "parameters.bogus: unknown key"));
  }
  SUBCASE("missing seed and bad values accumulate") {
    json j = {{"schema_version", 7},
              {"experiment", "parity-kick"},
              {"parameters", {{"taus", {-1.0}}}}};
    auto errs = validate_config(j);
    CHECK(has_error_containing(errs, "schema_version"));
    CHECK(has_error_containing(errs, "parameters.seed"));
    CHECK(has_error_containing(errs, "parameters.taus: must be positive"));
    CHECK(errs.size() >= 3);
  }
  SUBCASE("negative seed is rejected") {
    json j = {{"schema_version", 1},
              {"experiment", "offres"},
              {"parameters", {{"energies", {0.0, 1.0, 2.0}}, {"seed", -4}}}};
    CHECK(has_error_containing(validate_config(j), "seed must be non-negative"));
  }
  SUBCASE("format must be csv or json") {
    json j = valid_dephase();
    j["format"] = "xml";
    CHECK(has_error_containing(validate_config(j), "format"));
  }
  SUBCASE("imbalance without states is rejected") {
    json j = {{"schema_version", 1},
              {"experiment", "dfs-storage"},
              {"parameters",
               {{"num_qubits", 3}, {"lambda", 0}, {"taus", {1.0}}, {"seed", 1}}}};
    CHECK(has_error_containing(validate_config(j), "lambda"));
  }
  SUBCASE("tau-scan sequence name is checked") {
    json j = {{"schema_version", 1},
              {"experiment", "tau-scan"},
              {"parameters", {{"sequence", "mystery"}, {"seed", 1}}}};
    CHECK(has_error_containing(validate_config(j), "unknown sequence"));
  }
}

TEST_CASE("parse_config and load_config") {
  json j = valid_dephase();
  j["output"] = "out.csv";
  j["format"] = "json";
  ExperimentConfig cfg = parse_config(j);
  CHECK(cfg.kind == ExperimentKind::DephaseDecay);
  CHECK(cfg.output_path == "out.csv");
  CHECK(cfg.format == OutputFormat::Json);
  CHECK(cfg.parameters["alphas"].size() == 2);

  json bad = j;
  bad["experiment"] = "nope";
  CHECK_THROWS_AS(parse_config(bad), ConfigError);

  fs::path dir = fresh_work_dir("erd_cfg_test");
  fs::path good_path = dir / "good.json";
  {
    std::ofstream os(good_path);
    os << j.dump(2);
  }
  ExperimentConfig loaded = load_config(good_path.string());
  CHECK(loaded.kind == ExperimentKind::DephaseDecay);

  fs::path bad_path = dir / "bad.json";
  {
    std::ofstream os(bad_path);
    os << "{ this is not json";
  }
  CHECK_THROWS_AS(load_config(bad_path.string()), ConfigError);
  CHECK_THROWS_AS(load_config((dir / "missing.json").string()), ConfigError);
}

TEST_CASE("format_double survives a round trip") {
  for (double v : {1.0 / 3.0, 0.1, 2.0, -1.7e-300, 6.02214076e23, 0.0}) {
    std::string s = format_double(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }
  CHECK(format_double(2.0) == "2");
}

TEST_CASE("csv and json writers") {
  std::vector<ResultRow> rows = {
      {"demo", 0, 7, "tau=0.5", "residual", 0.25},
      {"demo", 1, 7, "tau=1", "residual", 1.0 / 3.0},
  };
  std::string csv = rows_as_csv(rows);
  CHECK(csv ==
        "experiment,grid_index,seed,params,metric,value\n"
        "demo,0,7,tau=0.5,residual,0.25\n"
        "demo,1,7,tau=1,residual,0.33333333333333331\n");

  std::ostringstream js;
  write_rows_json(js, rows);
  json parsed = json::parse(js.str());
  REQUIRE(parsed.size() == 2);
  CHECK(parsed[0]["experiment"] == "demo");
  CHECK(parsed[1]["metric"] == "residual");
  CHECK(parsed[1]["value"].get<double>() == 1.0 / 3.0);
}

TEST_CASE("dephase-decay experiment runs and passes") {
  ExperimentConfig cfg = parse_config(valid_dephase());
  RunOutcome out = run_experiment(cfg);
  CHECK(out.passed());
  CHECK(out.rows.size() == 6);  // three metrics per alpha
  CHECK(out.assertions.size() == 4);
}

TEST_CASE("offres experiment runs, passes, and honors the seed override") {
  json j = {{"schema_version", 1},
            {"experiment", "offres"},
            {"parameters",
             {{"energies", {0.0, 1.0, 2.5, 4.1}}, {"seed", 7}}}};
  ExperimentConfig cfg = parse_config(j);
  RunOutcome out = run_experiment(cfg);
  CHECK(out.passed());
  bool saw_at_most_4 = false;
  for (const auto& [name, ok] : out.assertions) {
    if (name == "at_most_4_steps") {
      saw_at_most_4 = true;
      CHECK(ok);
    }
  }
  CHECK(saw_at_most_4);

  RunOptions opts;
  opts.seed_override = 99;
  RunOutcome out2 = run_experiment(cfg, opts);
  for (const auto& r : out2.rows) CHECK(r.seed == 99);

  json jd = j;
  jd["parameters"]["degenerate_pair"] = true;
  RunOutcome outd = run_experiment(parse_config(jd));
  CHECK(outd.passed());
  bool saw_shared = false;
  for (const auto& [name, ok] : outd.assertions) {
    if (name == "degenerate_pair_shares_step") saw_shared = ok;
  }
  CHECK(saw_shared);
}

TEST_CASE("reruns with one seed are byte-identical; jobs do not change rows") {
  json j = {{"schema_version", 1},
            {"experiment", "dfs-storage"},
            {"parameters",
             {{"num_qubits", 2}, {"lambda", 0}, {"taus", {0.3, 1.0, 4.0}},
              {"seed", 11}}}};
  ExperimentConfig cfg = parse_config(j);
  std::string first = rows_as_csv(run_experiment(cfg).rows);
  std::string second = rows_as_csv(run_experiment(cfg).rows);
  CHECK(first == second);

  RunOptions parallel;
  parallel.jobs = 4;
  CHECK(rows_as_csv(run_experiment(cfg, parallel).rows) == first);

  RunOptions reseeded;
  reseeded.seed_override = 12;
  CHECK(rows_as_csv(run_experiment(cfg, reseeded).rows) != first);
}

TEST_CASE("write_outputs emits the row file plus a summary; report folds them") {
  fs::path dir = fresh_work_dir("erd_report_test");

  ExperimentConfig cfg = parse_config(valid_dephase());
  cfg.output_path = (dir / "dephase.csv").string();
  RunOutcome out = run_experiment(cfg);
  std::string written = write_outputs(cfg, {}, out);
  CHECK(written == cfg.output_path);
  CHECK(fs::exists(dir / "dephase.csv"));
  CHECK(fs::exists(dir / "dephase.csv.summary.json"));
  {
    std::ifstream in(dir / "dephase.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "experiment,grid_index,seed,params,metric,value");
  }

  // A second summary with a deliberate failure flips the consolidated flag.
  RunOutcome failing;
  failing.assertions = {{"always_true", true}, {"deliberately_false", false}};
  ExperimentConfig cfg2 = cfg;
  cfg2.output_path = (dir / "broken.csv").string();
  write_outputs(cfg2, {}, failing);

  ConsolidatedReport rep = consolidate(dir.string());
  CHECK(rep.entries.size() == out.assertions.size() + 2);
  CHECK_FALSE(rep.all_passed);
  int failures = 0;
  for (const auto& e : rep.entries) {
    if (!e.passed) ++failures;
  }
  CHECK(failures == 1);

  CHECK_THROWS(consolidate((dir / "not_a_dir").string()));
}

TEST_CASE("run_experiment rejects a sequence name validation cannot parse") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::TauScan;
  cfg.parameters = {{"sequence", "mystery"}, {"seed", 1}};
  CHECK_THROWS_AS(run_experiment(cfg), ConfigError);
}
