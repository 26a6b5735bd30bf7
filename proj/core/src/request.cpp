// Copyright 2026 The semsched Authors
// SPDX-License-Identifier: Apache-2.0

#include "semsched/request.hpp"

#include <stdexcept>
#include <string>

namespace semsched {

UrgencyLevel make_urgency(int rank, int levels) {
  if (levels < 1 || rank < 0 || rank >= levels) {
    throw std::out_of_range("urgency rank " + std::to_string(rank) + " outside [0, " +
                            std::to_string(levels - 1) + "]");
  }
  return UrgencyLevel{rank};
}

std::string_view to_string(Stage stage) {
  switch (stage) {
    case Stage::Waiting: return "waiting";
    case Stage::Prefilling: return "prefilling";
    case Stage::Decoding: return "decoding";
    case Stage::EvictedOffloaded: return "evicted_offloaded";
    case Stage::EvictedDiscarded: return "evicted_discarded";
    case Stage::Completed: return "completed";
  }
  return "unknown";
}

bool is_legal_transition(Stage from, Stage to) {
  switch (from) {
    case Stage::Waiting:
      return to == Stage::Prefilling;
    case Stage::Prefilling:
      return to == Stage::Decoding || to == Stage::EvictedOffloaded ||
             to == Stage::EvictedDiscarded;
    case Stage::Decoding:
      return to == Stage::Completed || to == Stage::EvictedOffloaded ||
             to == Stage::EvictedDiscarded;
    case Stage::EvictedOffloaded:
    case Stage::EvictedDiscarded:
      return to == Stage::Waiting;
    case Stage::Completed:
      return false;
  }
  return false;
}

void Request::transition(Stage to) {
  if (!is_legal_transition(stage, to)) {
    throw std::logic_error("request " + std::to_string(id) + ": illegal transition " +
                           std::string(to_string(stage)) + " -> " + std::string(to_string(to)));
  }
  stage = to;
}

bool counters_consistent(const Request& r) {
  if (r.prefilled_tokens < 0 || r.prefilled_tokens > r.prompt_len) return false;
  if (r.decoded_tokens < 0 || r.decoded_tokens > r.true_output_len) return false;
  if (r.recompute_tokens < 0 || r.recompute_tokens > r.decoded_tokens) return false;
  if (r.kv_device_tokens < 0 || r.kv_host_tokens < 0) return false;
  if (r.kv_device_tokens + r.kv_host_tokens > r.prefilled_tokens + r.decoded_tokens) return false;
  if (r.remaining_time < 0.0) return false;
  if (r.finish_time && *r.finish_time < r.arrival_time) return false;
  return true;
}

PriorityKey obtain_priority(UrgencyLevel predicted, Seconds remaining, Seconds arrival,
                            RequestId id) {
  if (!(remaining >= 0.0)) throw std::invalid_argument("obtain_priority: negative remaining time");
  return PriorityKey{predicted.rank, remaining, arrival, id};
}

PriorityKey eviction_priority(const PriorityKey& key) {
  return PriorityKey{-key.urgency, -key.remaining, -key.arrival, -key.id};
}

}  // namespace semsched
