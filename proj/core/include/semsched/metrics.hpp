// Copyright 2026 The semsched Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "semsched/config.hpp"
#include "semsched/engine.hpp"

namespace semsched {

// Mean of (finish - arrival) over the records. Throws std::invalid_argument
// for an empty set or when any record is unfinished (the message lists the
// unfinished ids).
Seconds average_waiting_time(std::span<const RequestRecord> records);

// Mean over the records of true urgency `level` of
// (finish - arrival) / generated tokens. Empty when the level has no records.
std::optional<Seconds> normalized_waiting_time(std::span<const RequestRecord> records, int level);

// Mean of per-request (finish - arrival) / generated tokens over all records.
std::optional<Seconds> normalized_waiting_time(std::span<const RequestRecord> records);

enum class Ranking { True, Predicted };

struct Violation {
  RequestId earlier;  // finished first, less urgent
  RequestId later;    // arrived before `earlier` finished, more urgent
};

struct AuditResult {
  std::vector<Violation> listed;  // at most the requested number of pairs
  std::size_t violations = 0;
  std::size_t comparable = 0;     // pairs with f_i < f_j and a_j <= f_i
  double rate = 0.0;              // violations / comparable, 0 without pairs
};

// Ordered pairs (i, j) with f_i < f_j that break
// (f_i < a_j) or (rank_i <= rank_j). Unfinished records are skipped.
AuditResult constraint_audit(std::span<const RequestRecord> records,
                             Ranking ranking = Ranking::True,
                             std::size_t max_listed = std::numeric_limits<std::size_t>::max());

struct LevelStats {
  int level = 0;
  std::size_t count = 0;        // completed requests of this true urgency
  Seconds norm_wait = 0.0;      // seconds per generated token
  Seconds avg_wait = 0.0;       // seconds
};

struct RunReport {
  std::string policy;
  std::string profile;
  std::uint64_t seed = 0;
  std::string axis;             // empty outside sweeps
  std::string axis_value;
  std::vector<LevelStats> levels;  // only levels present in the workload
  std::size_t requests = 0;
  std::size_t completed = 0;
  Seconds avg_wait = 0.0;
  Seconds norm_wait = 0.0;            // request-averaged
  Seconds norm_wait_level_avg = 0.0;  // mean of the per-level values
  std::size_t violations = 0;
  std::size_t comparable_pairs = 0;
  double violation_rate = 0.0;
  std::size_t evictions = 0;
  std::size_t admission_failures = 0;
  std::size_t unservable = 0;
  std::size_t iterations = 0;
  Tokens peak_used = 0;
  Seconds makespan = 0.0;
  std::string config_json;      // canonical echo of the scenario
};

// Summarizes a finished run. Unservable requests are counted, not averaged.
RunReport make_report(const ScenarioConfig& cfg, const Trace& trace);

enum class SeedMode { Same, Offset };

struct SweepResult {
  ScenarioConfig config;
  RunReport report;
};

// One run per value with `axis` set to it; Offset adds the value's index to
// the base seed. Runs on up to `jobs` threads; the result order follows
// `values`. Throws ConfigError for an empty list, unknown axis or bad value.
std::vector<SweepResult> sweep(const ScenarioConfig& base, const std::string& axis,
                               const std::vector<std::string>& values,
                               SeedMode seed_mode = SeedMode::Same, unsigned jobs = 1);

}  // namespace semsched
