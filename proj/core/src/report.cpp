// Copyright 2026 The semsched Authors
// SPDX-License-Identifier: Apache-2.0

#include "semsched/report.hpp"

#include <charconv>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include <json.hpp>

namespace semsched {
namespace {

using json = nlohmann::json;

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

template <typename T>
T parse_number(std::string_view field, std::size_t line, std::string_view name) {
  T value{};
  const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
  if (res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
    throw std::invalid_argument("results.csv line " + std::to_string(line) + ": bad " +
                                std::string(name) + " '" + std::string(field) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

json event_json(const TraceEvent& e) {
  json j;
  j["t"] = e.time;
  j["kind"] = std::string(to_string(e.kind));
  if (e.id >= 0) j["id"] = e.id;
  switch (e.kind) {
    case EventKind::Iteration:
      j["end"] = e.end;
      j["batch"] = std::string(to_string(e.batch_kind));
      j["members"] = e.members;
      break;
    case EventKind::Eviction:
      j["prefill"] = std::string(to_string(e.decision.prefill));
      j["prefill_tokens"] = e.decision.prefill_tokens;
      j["decode_saved"] = e.decision.decode_saved;
      j["decode_discarded"] = e.decision.decode_discarded;
      j["f_before"] = e.remaining_before;
      j["f_after"] = e.remaining_after;
      break;
    default: break;
  }
  switch (e.kind) {
    case EventKind::Iteration:
    case EventKind::Eviction:
    case EventKind::AdmissionFailure:
    case EventKind::Completion:
    case EventKind::Unservable:
    case EventKind::RunEnd:
      j["used"] = e.used;
      j["capacity"] = e.capacity;
      break;
    default: break;
  }
  return j;
}

json record_json(const RequestRecord& r) {
  json j;
  j["kind"] = "request";
  j["id"] = r.id;
  j["arrival"] = r.arrival;
  j["ready"] = r.ready;
  j["first_scheduled"] = r.first_scheduled ? json(*r.first_scheduled) : json(nullptr);
  j["finish"] = r.finish ? json(*r.finish) : json(nullptr);
  j["prompt_len"] = r.prompt_len;
  j["output_len"] = r.output_len;
  j["generated"] = r.generated;
  j["evictions"] = r.evictions;
  j["urgency"] = r.true_urgency.rank;
  j["predicted_urgency"] = r.predicted_urgency.rank;
  j["predicted_bucket"] = r.predicted_bucket.index;
  j["predicted_len"] = r.predicted_bucket.representative_len;
  j["unservable"] = r.unservable;
  return j;
}

}  // namespace

std::string report_json(const RunReport& r, int indent) {
  json j;
  j["policy"] = r.policy;
  j["profile"] = r.profile;
  j["seed"] = r.seed;
  if (!r.axis.empty()) {
    j["axis"] = r.axis;
    j["axis_value"] = r.axis_value;
  }
  j["requests"] = r.requests;
  j["completed"] = r.completed;
  j["avg_wait_s"] = r.avg_wait;
  j["norm_wait_s_per_tok"] = r.norm_wait;
  j["norm_wait_level_avg_s_per_tok"] = r.norm_wait_level_avg;
  json levels = json::array();
  for (const LevelStats& s : r.levels) {
    levels.push_back({{"urgency", s.level},
                      {"count", s.count},
                      {"norm_wait_s_per_tok", s.norm_wait},
                      {"avg_wait_s", s.avg_wait}});
  }
  j["levels"] = std::move(levels);
  j["violations"] = r.violations;
  j["comparable_pairs"] = r.comparable_pairs;
  j["violation_rate"] = r.violation_rate;
  j["evictions"] = r.evictions;
  j["admission_failures"] = r.admission_failures;
  j["unservable"] = r.unservable;
  j["iterations"] = r.iterations;
  j["peak_kv_tokens"] = r.peak_used;
  j["makespan_s"] = r.makespan;
  j["config"] = r.config_json.empty() ? json(nullptr) : json::parse(r.config_json);
  return j.dump(indent);
}

std::vector<ResultRow> result_rows(const RunReport& report) {
  std::vector<ResultRow> rows;
  rows.reserve(report.levels.size());
  for (const LevelStats& s : report.levels) {
    rows.push_back({report.policy, report.profile, report.axis, report.axis_value, s.level,
                    s.norm_wait, s.avg_wait, report.violations, report.evictions, report.seed});
  }
  return rows;
}

std::string results_csv(std::span<const ResultRow> rows) {
  std::string out(kResultsHeader);
  out += '\n';
  for (const ResultRow& r : rows) {
    out += r.policy + ',' + r.profile + ',' + r.axis + ',' + r.axis_value + ',' +
           std::to_string(r.urgency) + ',' + format_double(r.norm_wait_s_per_tok) + ',' +
           format_double(r.avg_wait_s) + ',' + std::to_string(r.violations) + ',' +
           std::to_string(r.evictions) + ',' + std::to_string(r.seed) + '\n';
  }
  return out;
}

std::vector<ResultRow> parse_results_csv(std::string_view text) {
  std::vector<ResultRow> rows;
  std::size_t line_no = 0;
  bool header_seen = false;
  for (std::string_view line : split(text, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != kResultsHeader) {
        throw std::invalid_argument("results.csv line 1: unexpected header");
      }
      header_seen = true;
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 10) {
      throw std::invalid_argument("results.csv line " + std::to_string(line_no) +
                                  ": expected 10 fields");
    }
    ResultRow r;
    r.policy = f[0];
    r.profile = f[1];
    r.axis = f[2];
    r.axis_value = f[3];
    r.urgency = parse_number<int>(f[4], line_no, "urgency");
    r.norm_wait_s_per_tok = parse_number<double>(f[5], line_no, "norm_wait_s_per_tok");
    r.avg_wait_s = parse_number<double>(f[6], line_no, "avg_wait_s");
    r.violations = parse_number<std::size_t>(f[7], line_no, "violations");
    r.evictions = parse_number<std::size_t>(f[8], line_no, "evictions");
    r.seed = parse_number<std::uint64_t>(f[9], line_no, "seed");
    rows.push_back(std::move(r));
  }
  if (!header_seen) throw std::invalid_argument("results.csv: missing header");
  return rows;
}

std::string trace_jsonl(const Trace& trace) {
  std::string out;
  for (const TraceEvent& e : trace.events) {
    out += event_json(e).dump();
    out += '\n';
  }
  for (const RequestRecord& r : trace.requests) {
    out += record_json(r).dump();
    out += '\n';
  }
  return out;
}

std::vector<RequestRecord> records_from_trace_jsonl(std::istream& in) {
  std::vector<RequestRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      throw std::runtime_error("trace line " + std::to_string(line_no) + ": malformed JSON");
    }
    if (j.value("kind", "") != "request") continue;
    try {
      RequestRecord r;
      r.id = j.at("id").get<RequestId>();
      r.arrival = j.at("arrival").get<double>();
      r.ready = j.value("ready", r.arrival);
      if (j.contains("first_scheduled") && !j["first_scheduled"].is_null()) {
        r.first_scheduled = j["first_scheduled"].get<double>();
      }
      if (!j.at("finish").is_null()) r.finish = j["finish"].get<double>();
      r.prompt_len = j.value("prompt_len", Tokens{0});
      r.output_len = j.value("output_len", Tokens{0});
      r.generated = j.at("generated").get<Tokens>();
      r.evictions = j.value("evictions", 0);
      r.true_urgency.rank = j.at("urgency").get<int>();
      r.predicted_urgency.rank = j.value("predicted_urgency", r.true_urgency.rank);
      r.predicted_bucket.index = j.value("predicted_bucket", 0);
      r.predicted_bucket.representative_len = j.value("predicted_len", Tokens{0});
      r.unservable = j.value("unservable", false);
      out.push_back(r);
    } catch (const json::exception& e) {
      throw std::runtime_error("trace line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace semsched
