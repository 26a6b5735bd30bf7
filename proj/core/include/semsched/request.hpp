// Copyright 2026 The semsched Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string_view>

namespace semsched {

using RequestId = std::int64_t;
using Tokens = std::int64_t;
using Seconds = double;

inline constexpr int kDefaultUrgencyLevels = 5;
inline constexpr int kDefaultLengthBuckets = 5;
inline constexpr Tokens kDefaultMaxOutputLen = 500;

// Rank 0 is the most urgent level. Smaller rank always means strictly higher
// priority.
struct UrgencyLevel {
  int rank = 0;

  friend constexpr auto operator<=>(UrgencyLevel, UrgencyLevel) = default;
};

// Throws std::out_of_range unless 0 <= rank < levels.
UrgencyLevel make_urgency(int rank, int levels = kDefaultUrgencyLevels);

enum class Stage {
  Waiting,
  Prefilling,
  Decoding,
  EvictedOffloaded,
  EvictedDiscarded,
  Completed,
};

std::string_view to_string(Stage stage);

// Waiting -> Prefilling -> Decoding -> Completed, plus
// Prefilling/Decoding -> Evicted* -> Waiting.
bool is_legal_transition(Stage from, Stage to);

struct LengthBucket {
  int index = 0;
  Tokens representative_len = 0;

  friend bool operator==(const LengthBucket&, const LengthBucket&) = default;
};

struct Request {
  RequestId id = 0;
  Seconds arrival_time = 0.0;
  Tokens prompt_len = 0;
  Tokens true_output_len = 0;
  UrgencyLevel true_urgency;

  // Scheduler-visible predictions.
  UrgencyLevel predicted_urgency;
  LengthBucket predicted_bucket;
  Seconds remaining_time = 0.0;  // f_t

  // Progress. prefilled_tokens counts prompt tokens whose KV exists on device
  // or host; recompute_tokens counts generated tokens whose KV was discarded.
  Tokens prefilled_tokens = 0;
  Tokens decoded_tokens = 0;
  Tokens recompute_tokens = 0;
  Tokens kv_device_tokens = 0;
  Tokens kv_host_tokens = 0;

  std::optional<Seconds> finish_time;
  Stage stage = Stage::Waiting;
  bool started = false;  // has been part of an executed batch

  // Throws std::logic_error on an illegal stage change.
  void transition(Stage to);

  bool needs_prefill() const { return stage == Stage::Waiting; }
  bool completed() const { return stage == Stage::Completed; }
};

// Checks the counter invariants; returns false on the first violated one.
bool counters_consistent(const Request& r);

// Lexicographic dispatch order; smaller keys are dispatched sooner. The id
// component makes the order total.
struct PriorityKey {
  int urgency = 0;
  double remaining = 0.0;
  double arrival = 0.0;
  RequestId id = 0;

  friend constexpr auto operator<=>(const PriorityKey&, const PriorityKey&) = default;
};

PriorityKey obtain_priority(UrgencyLevel predicted, Seconds remaining, Seconds arrival,
                            RequestId id);

// Negates every component: the smallest eviction key belongs to the request
// the dispatch order would serve last. Applying it twice is the identity.
PriorityKey eviction_priority(const PriorityKey& key);

}  // namespace semsched
