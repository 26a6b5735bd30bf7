// Copyright 2026 The semsched Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "semsched/request.hpp"

namespace semsched {

struct TokenRange {
  Tokens lo = 1;
  Tokens hi = 1;
};

enum class Concurrency {
  Uniform,  // each tick draws its request count from [1, max_concurrent]
  Fixed,    // every tick carries max_concurrent requests
};

struct WorkloadSpec {
  int levels = kDefaultUrgencyLevels;
  std::vector<double> urgency_weights;  // empty: uniform over levels
  TokenRange prompt_len{16, 128};
  TokenRange output_len{1, kDefaultMaxOutputLen};
  int buckets = kDefaultLengthBuckets;
  Tokens max_output_len = kDefaultMaxOutputLen;
  Seconds gap = 1.0;
  int max_concurrent = 5;
  Concurrency concurrency = Concurrency::Uniform;
  std::size_t total_requests = 100;
  std::uint64_t seed = 1;
};

// Throws std::invalid_argument describing the first invalid field.
void validate(const WorkloadSpec& spec);

// Arrival times of `count` requests: ticks at multiples of spec.gap, each
// carrying the configured number of simultaneous arrivals.
std::vector<Seconds> arrival_times(const WorkloadSpec& spec, std::size_t count);

// spec.total_requests time-ordered requests with ids 0..N-1. Only ground
// truth is filled in; predictions are added by the simulator.
std::vector<Request> generate(const WorkloadSpec& spec);

struct DatasetRecord {
  std::int64_t id = 0;
  std::optional<std::string> prompt;
  std::optional<Tokens> prompt_tokens;
  int urgency = 0;
  Tokens output_tokens = 1;

  friend bool operator==(const DatasetRecord&, const DatasetRecord&) = default;
};

struct DatasetError {
  std::size_t line = 0;  // 1-based
  std::string reason;
};

struct DatasetLoad {
  std::vector<DatasetRecord> records;
  std::vector<DatasetError> errors;
};

// One JSON object per line; blank lines are skipped. Invalid lines are
// reported in `errors` and do not stop the load.
DatasetLoad parse_dataset(std::istream& in, int levels = kDefaultUrgencyLevels);

// Throws std::runtime_error if the file cannot be opened.
DatasetLoad load_dataset(const std::filesystem::path& path, int levels = kDefaultUrgencyLevels);

std::string serialize_dataset(const std::vector<DatasetRecord>& records);

// prompt_tokens when present, else the whitespace-separated word count.
Tokens prompt_token_count(const DatasetRecord& record);

// Records supply content, `spec` supplies timing. Ids are 0..N-1 in record
// order.
std::vector<Request> requests_from_dataset(const std::vector<DatasetRecord>& records,
                                           const WorkloadSpec& spec);

}  // namespace semsched
