// Copyright 2026 The semsched Authors
// SPDX-License-Identifier: Apache-2.0

// semsched: run scheduling scenarios, sweep a parameter, audit a trace.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "semsched/config.hpp"
#include "semsched/engine.hpp"
#include "semsched/metrics.hpp"
#include "semsched/report.hpp"

namespace fs = std::filesystem;
using namespace semsched;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitUnservable = 2;

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
  if (!out) throw ConfigError("failed writing " + path.string());
}

void prepare_out(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());
}

struct SimulateArgs {
  std::string config;
  std::optional<std::string> policy;
  std::optional<std::string> seed;
  std::optional<std::string> profile;
  std::string out;
};

int simulate(const SimulateArgs& a) {
  ScenarioConfig cfg = load_scenario(a.config);
  if (a.policy) set_config_value(cfg, "policy", *a.policy);
  if (a.seed) set_config_value(cfg, "seed", *a.seed);
  if (a.profile) set_config_value(cfg, "profile", *a.profile);
  cfg.record_events = true;
  validate(cfg);
  prepare_out(a.out);

  const Trace trace = run(cfg);
  const RunReport report = make_report(cfg, trace);
  const std::vector<ResultRow> rows = result_rows(report);
  write_file(fs::path(a.out) / "report.json", report_json(report) + "\n");
  write_file(fs::path(a.out) / "results.csv", results_csv(rows));
  write_file(fs::path(a.out) / "trace.jsonl", trace_jsonl(trace));

  std::cout << "policy=" << report.policy << " profile=" << report.profile
            << " requests=" << report.requests << " avg_wait_s=" << report.avg_wait
            << " norm_wait_s_per_tok=" << report.norm_wait << " violations=" << report.violations
            << " evictions=" << report.evictions << " unservable=" << report.unservable << "\n";
  return report.unservable > 0 ? kExitUnservable : kExitOk;
}

struct SweepArgs {
  std::string config;
  std::string axis;
  std::vector<std::string> values;
  std::string seed_mode = "same";
  unsigned jobs = 1;
  std::string out;
};

int run_sweep(const SweepArgs& a) {
  const ScenarioConfig base = load_scenario(a.config);
  SeedMode mode = SeedMode::Same;
  if (a.seed_mode == "offset") {
    mode = SeedMode::Offset;
  } else if (a.seed_mode != "same") {
    throw ConfigError("--seed-mode must be 'same' or 'offset'");
  }
  std::vector<SweepResult> results = sweep(base, a.axis, a.values, mode, a.jobs);
  prepare_out(a.out);

  std::vector<ResultRow> rows;
  std::string reports = "[\n";
  std::size_t unservable = 0;
  for (std::size_t k = 0; k < results.size(); ++k) {
    const RunReport& r = results[k].report;
    const auto more = result_rows(r);
    rows.insert(rows.end(), more.begin(), more.end());
    reports += report_json(r) + (k + 1 < results.size() ? ",\n" : "\n");
    unservable += r.unservable;
    std::cout << a.axis << "=" << r.axis_value << " norm_wait_s_per_tok=" << r.norm_wait
              << " avg_wait_s=" << r.avg_wait << " violations=" << r.violations
              << " evictions=" << r.evictions << "\n";
  }
  reports += "]\n";
  write_file(fs::path(a.out) / "report.json", reports);
  write_file(fs::path(a.out) / "results.csv", results_csv(rows));
  return unservable > 0 ? kExitUnservable : kExitOk;
}

struct AuditArgs {
  std::string trace;
  std::string ranking = "true";
};

int audit(const AuditArgs& a) {
  std::ifstream in(a.trace);
  if (!in) throw ConfigError("cannot open trace " + a.trace);
  Ranking ranking = Ranking::True;
  if (a.ranking == "predicted") {
    ranking = Ranking::Predicted;
  } else if (a.ranking != "true") {
    throw ConfigError("--ranking must be 'true' or 'predicted'");
  }
  std::vector<RequestRecord> records;
  try {
    records = records_from_trace_jsonl(in);
  } catch (const std::runtime_error& e) {
    throw ConfigError(e.what());
  }
  if (records.empty()) throw ConfigError("trace has no request records: " + a.trace);

  std::size_t unservable = 0;
  std::vector<RequestRecord> served;
  for (const RequestRecord& r : records) {
    if (r.unservable) {
      ++unservable;
    } else {
      served.push_back(r);
    }
  }
  const AuditResult result = constraint_audit(served, ranking, 20);
  std::cout << "requests=" << records.size() << " unservable=" << unservable
            << " comparable_pairs=" << result.comparable << " violations=" << result.violations
            << " rate=" << result.rate << "\n";
  for (const Violation& v : result.listed) {
    std::cout << "  violation: " << v.earlier << " finished before " << v.later << "\n";
  }
  if (result.listed.size() < result.violations) {
    std::cout << "  ... " << result.violations - result.listed.size() << " more\n";
  }
  if (!served.empty()) {
    std::cout << "avg_wait_s=" << average_waiting_time(served) << "\n";
    for (int level = 0; level < 64; ++level) {
      if (auto nw = normalized_waiting_time(served, level)) {
        std::cout << "urgency " << level << " norm_wait_s_per_tok=" << *nw << "\n";
      }
    }
  }
  return unservable > 0 ? kExitUnservable : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semantic-aware LLM serving scheduler simulator"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Run one scenario");
  sim_cmd->add_option("--config", sim.config, "Scenario JSON")->required();
  sim_cmd->add_option("--policy", sim.policy, "semantic|fcfs|sjf|hpjf");
  sim_cmd->add_option("--seed", sim.seed, "Random seed");
  sim_cmd->add_option("--profile", sim.profile, "GPU cost profile name");
  sim_cmd->add_option("--out", sim.out, "Output directory")->required();

  SweepArgs sw;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a scenario once per axis value");
  sweep_cmd->add_option("--config", sw.config, "Scenario JSON")->required();
  sweep_cmd->add_option("--axis", sw.axis, "Config key to vary")->required();
  sweep_cmd->add_option("--values", sw.values, "Comma-separated values")
      ->required()
      ->delimiter(',');
  sweep_cmd->add_option("--seed-mode", sw.seed_mode, "same|offset (seed + value index)");
  sweep_cmd->add_option("--jobs", sw.jobs, "Parallel runs")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--out", sw.out, "Output directory")->required();

  AuditArgs au;
  auto* audit_cmd = app.add_subcommand("audit", "Check a trace for urgency-order violations");
  audit_cmd->add_option("--trace", au.trace, "trace.jsonl")->required();
  audit_cmd->add_option("--ranking", au.ranking, "true|predicted");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*sim_cmd) return simulate(sim);
    if (*sweep_cmd) return run_sweep(sw);
    if (*audit_cmd) return audit(au);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
