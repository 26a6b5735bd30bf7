// Copyright 2026 The semsched Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "semsched/engine.hpp"
#include "semsched/metrics.hpp"

namespace semsched {

// Pretty-printed JSON object for a report; the config echo is embedded as an
// object under "config".
std::string report_json(const RunReport& report, int indent = 2);

// One row of results.csv.
struct ResultRow {
  std::string policy;
  std::string profile;
  std::string axis;
  std::string axis_value;
  int urgency = 0;
  double norm_wait_s_per_tok = 0.0;
  double avg_wait_s = 0.0;
  std::size_t violations = 0;
  std::size_t evictions = 0;
  std::uint64_t seed = 0;

  bool operator==(const ResultRow&) const = default;
};

inline constexpr std::string_view kResultsHeader =
    "policy,profile,axis,axis_value,urgency,norm_wait_s_per_tok,avg_wait_s,violations,"
    "evictions,seed";

// One row per urgency level present in the report.
std::vector<ResultRow> result_rows(const RunReport& report);

// Header plus rows; doubles use the shortest round-trip form.
std::string results_csv(std::span<const ResultRow> rows);

// Inverse of results_csv. Throws std::invalid_argument with the line number.
std::vector<ResultRow> parse_results_csv(std::string_view text);

// One JSON object per line: the recorded events in order, then one
// {"kind":"request",...} line per request.
std::string trace_jsonl(const Trace& trace);

// Request records from the "request" lines of a trace.jsonl stream; other
// lines are ignored. Throws std::runtime_error naming the offending line.
std::vector<RequestRecord> records_from_trace_jsonl(std::istream& in);

}  // namespace semsched
