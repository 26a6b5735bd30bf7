// Copyright 2026 The semsched Authors
// SPDX-License-Identifier: Apache-2.0

#include "semsched/workload.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "semsched/predictor.hpp"

namespace semsched {
namespace {

constexpr std::uint64_t kTimingStream = 0x7469636bULL;   // "tick"
constexpr std::uint64_t kContentStream = 0x636f6e74ULL;  // "cont"

using nlohmann::json;

Tokens uniform_tokens(std::mt19937_64& rng, TokenRange r) {
  return std::uniform_int_distribution<Tokens>(r.lo, r.hi)(rng);
}

}  // namespace

void validate(const WorkloadSpec& spec) {
  auto fail = [](const std::string& what) { throw std::invalid_argument("workload: " + what); };
  if (spec.levels < 1) fail("levels must be >= 1");
  if (!spec.urgency_weights.empty()) {
    if (spec.urgency_weights.size() != static_cast<std::size_t>(spec.levels)) {
      fail("urgency_weights must have one entry per level");
    }
    double total = 0.0;
    for (double w : spec.urgency_weights) {
      if (!(w >= 0.0) || !std::isfinite(w)) fail("urgency_weights must be finite and >= 0");
      total += w;
    }
    if (total <= 0.0) fail("urgency_weights must not all be zero");
  }
  if (spec.buckets < 1) fail("buckets must be >= 1");
  if (spec.max_output_len < 1) fail("max_output_len must be >= 1");
  if (spec.prompt_len.lo < 1 || spec.prompt_len.hi < spec.prompt_len.lo) {
    fail("prompt_len range must satisfy 1 <= lo <= hi");
  }
  if (spec.output_len.lo < 1 || spec.output_len.hi < spec.output_len.lo ||
      spec.output_len.hi > spec.max_output_len) {
    fail("output_len range must satisfy 1 <= lo <= hi <= max_output_len");
  }
  if (!(spec.gap > 0.0) || !std::isfinite(spec.gap)) fail("gap must be > 0");
  if (spec.max_concurrent < 1) fail("max_concurrent must be >= 1");
}

std::vector<Seconds> arrival_times(const WorkloadSpec& spec, std::size_t count) {
  validate(spec);
  auto rng = request_rng(spec.seed, 0, kTimingStream);
  std::uniform_int_distribution<int> per_tick(1, spec.max_concurrent);
  std::vector<Seconds> out;
  out.reserve(count);
  for (std::size_t tick = 0; out.size() < count; ++tick) {
    const int k = spec.concurrency == Concurrency::Fixed ? spec.max_concurrent : per_tick(rng);
    const Seconds t = static_cast<double>(tick) * spec.gap;
    for (int i = 0; i < k && out.size() < count; ++i) out.push_back(t);
  }
  return out;
}

std::vector<Request> generate(const WorkloadSpec& spec) {
  const std::vector<Seconds> times = arrival_times(spec, spec.total_requests);
  auto rng = request_rng(spec.seed, 0, kContentStream);

  std::vector<double> weights = spec.urgency_weights;
  if (weights.empty()) weights.assign(static_cast<std::size_t>(spec.levels), 1.0);
  std::discrete_distribution<int> urgency(weights.begin(), weights.end());

  std::vector<Request> out(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    Request& r = out[i];
    r.id = static_cast<RequestId>(i);
    r.arrival_time = times[i];
    r.true_urgency = UrgencyLevel{urgency(rng)};
    r.prompt_len = uniform_tokens(rng, spec.prompt_len);
    r.true_output_len = uniform_tokens(rng, spec.output_len);
  }
  return out;
}

DatasetLoad parse_dataset(std::istream& in, int levels) {
  DatasetLoad out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); })) {
      continue;
    }
    auto reject = [&](std::string reason) {
      out.errors.push_back({line_no, std::move(reason)});
    };
    json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded() || !j.is_object()) {
      reject("malformed JSON");
      continue;
    }
    try {
      DatasetRecord rec;
      rec.id = j.value("id", static_cast<std::int64_t>(line_no));
      if (j.contains("prompt") && !j["prompt"].is_null()) rec.prompt = j["prompt"].get<std::string>();
      if (j.contains("prompt_tokens") && !j["prompt_tokens"].is_null()) {
        rec.prompt_tokens = j["prompt_tokens"].get<Tokens>();
      }
      if (!rec.prompt_tokens && !rec.prompt) {
        reject("missing both prompt_tokens and prompt");
        continue;
      }
      if (!j.contains("urgency")) {
        reject("missing urgency");
        continue;
      }
      rec.urgency = j["urgency"].get<int>();
      if (rec.urgency < 0 || rec.urgency >= levels) {
        reject("urgency " + std::to_string(rec.urgency) + " outside [0, " +
               std::to_string(levels - 1) + "]");
        continue;
      }
      if (!j.contains("output_tokens")) {
        reject("missing output_tokens");
        continue;
      }
      rec.output_tokens = j["output_tokens"].get<Tokens>();
      if (rec.output_tokens < 1) {
        reject("output_tokens must be >= 1");
        continue;
      }
      if (prompt_token_count(rec) < 1) {
        reject("prompt must contain at least one token");
        continue;
      }
      out.records.push_back(std::move(rec));
    } catch (const json::exception& e) {
      reject(std::string("bad field type: ") + e.what());
    }
  }
  return out;
}

DatasetLoad load_dataset(const std::filesystem::path& path, int levels) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset " + path.string());
  return parse_dataset(in, levels);
}

std::string serialize_dataset(const std::vector<DatasetRecord>& records) {
  std::string out;
  for (const auto& rec : records) {
    json j;
    j["id"] = rec.id;
    if (rec.prompt) j["prompt"] = *rec.prompt;
    if (rec.prompt_tokens) j["prompt_tokens"] = *rec.prompt_tokens;
    j["urgency"] = rec.urgency;
    j["output_tokens"] = rec.output_tokens;
    out += j.dump();
    out += '\n';
  }
  return out;
}

Tokens prompt_token_count(const DatasetRecord& record) {
  if (record.prompt_tokens) return *record.prompt_tokens;
  if (!record.prompt) return 0;
  std::istringstream words(*record.prompt);
  Tokens n = 0;
  for (std::string w; words >> w;) ++n;
  return n;
}

std::vector<Request> requests_from_dataset(const std::vector<DatasetRecord>& records,
                                           const WorkloadSpec& spec) {
  const std::vector<Seconds> times = arrival_times(spec, records.size());
  std::vector<Request> out(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    Request& r = out[i];
    r.id = static_cast<RequestId>(i);
    r.arrival_time = times[i];
    r.true_urgency = make_urgency(records[i].urgency, spec.levels);
    r.prompt_len = prompt_token_count(records[i]);
    r.true_output_len = records[i].output_tokens;
  }
  return out;
}

}  // namespace semsched
