// Copyright 2026 The semsched Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "semsched/config.hpp"
#include "semsched/kv_manager.hpp"
#include "semsched/request.hpp"
#include "semsched/scheduler.hpp"

namespace semsched {

// Per-request outcome of a run.
struct RequestRecord {
  RequestId id = 0;
  Seconds arrival = 0.0;
  Seconds ready = 0.0;                   // predictions available
  std::optional<Seconds> first_scheduled;
  std::optional<Seconds> finish;
  Tokens prompt_len = 0;
  Tokens output_len = 0;                 // true length
  Tokens generated = 0;
  int evictions = 0;
  UrgencyLevel true_urgency;
  UrgencyLevel predicted_urgency;
  LengthBucket predicted_bucket;
  bool unservable = false;

  bool completed() const { return finish.has_value(); }
};

enum class EventKind {
  Arrival,
  PredictionReady,
  Iteration,
  Eviction,
  AdmissionFailure,
  Completion,
  Unservable,
  RunEnd,
};

std::string_view to_string(EventKind kind);

struct TraceEvent {
  Seconds time = 0.0;
  EventKind kind = EventKind::Arrival;
  RequestId id = -1;

  // Iteration
  Seconds end = 0.0;
  BatchKind batch_kind = BatchKind::Decode;
  std::vector<RequestId> members;

  // Memory after the event (Iteration, Eviction, Completion)
  Tokens used = 0;
  Tokens capacity = 0;

  // Eviction
  EvictionDecision decision;
  Seconds remaining_before = 0.0;
  Seconds remaining_after = 0.0;
};

struct Trace {
  std::vector<RequestRecord> requests;  // indexed by id
  std::vector<TraceEvent> events;       // only when record_events is set
  std::size_t iterations = 0;
  std::size_t evictions = 0;
  std::size_t admission_failures = 0;
  std::size_t unservable = 0;
  Tokens peak_used = 0;
  Tokens capacity = 0;
  Seconds makespan = 0.0;
};

// Device time of one round for the members' state at the start of the round.
// Members needing prefill are restored one after another (reload + missing
// prefill + recompute); decoding members then take one step each, combined by
// `rule` (max: parallel, sum: serial).
Seconds batch_duration(const Batch& batch, std::span<const Request> pool, const GpuProfile& p,
                       DecodeCostRule rule = DecodeCostRule::Max);

// Fills predicted urgency, bucket and f_t for every request from the
// scenario's error models. Deterministic per cfg.seed.
void apply_predictions(std::vector<Request>& requests, const ScenarioConfig& cfg);

// The requests the scenario describes: generated, or loaded from
// cfg.dataset. Throws ConfigError if the dataset cannot be read.
std::vector<Request> scenario_requests(const ScenarioConfig& cfg);

// Runs the scenario to completion. Throws ConfigError for an invalid config.
Trace run(const ScenarioConfig& cfg);

// Runs a caller-supplied request list (ids 0..N-1, sorted by arrival). Only
// ground truth is read; predictions come from the scenario's error models.
Trace run(const ScenarioConfig& cfg, std::vector<Request> requests);

}  // namespace semsched
