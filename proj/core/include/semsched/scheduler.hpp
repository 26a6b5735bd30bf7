// Copyright 2026 The semsched Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "semsched/queues.hpp"
#include "semsched/request.hpp"

namespace semsched {

enum class Policy { Semantic, FCFS, SJF, HPJF };

std::string_view to_string(Policy policy);
std::optional<Policy> parse_policy(std::string_view name);

// Ordering key each policy uses for both heaps.
//   Semantic: (predicted urgency, f_t, arrival, id)
//   FCFS:     (not-yet-started, 0, arrival, id); started requests never yield
//   SJF:      (0, f_t, arrival, id)
//   HPJF:     (predicted urgency, 0, arrival, id)
PriorityKey dispatch_key(Policy policy, const Request& r);

KeyFunction key_function(Policy policy);

enum class BatchKind { Prefill, Decode };

std::string_view to_string(BatchKind kind);

struct Batch {
  std::vector<RequestId> members;  // dispatch order
  BatchKind kind = BatchKind::Decode;

  bool empty() const { return members.empty(); }
  std::size_t size() const { return members.size(); }
};

using Candidate = DispatchQueue::Entry;

// Drains `buffer` into `heap`, then pops up to b entries in key order.
std::vector<Candidate> extract_top_b(DispatchQueue& heap, ArrivalBuffer& buffer, std::size_t b,
                                     std::span<const Request> pool, const KeyFunction& key);

// Stage-aware batch selection. Candidates come from extract_top_b and are
// combined with the ongoing requests of the previous round. When the best of
// these needs no prefill, prefill-needing candidates are sent back to the heap
// and only decoding requests compete for the batch. Everything not selected
// (candidates and ongoing alike) is pushed back into `heap`.
Batch stage_aware_schedule(DispatchQueue& heap, ArrivalBuffer& buffer,
                           std::span<const RequestId> ongoing, std::size_t b,
                           std::span<const Request> pool, const KeyFunction& key);

// Baseline selection: the b best of candidates and ongoing requests under
// the policy key, regardless of stage.
Batch baseline_policy(DispatchQueue& heap, ArrivalBuffer& buffer,
                      std::span<const RequestId> ongoing, std::size_t b,
                      std::span<const Request> pool, const KeyFunction& key);

// Semantic -> stage_aware_schedule; baselines -> baseline_policy.
Batch schedule_round(Policy policy, DispatchQueue& heap, ArrivalBuffer& buffer,
                     std::span<const RequestId> ongoing, std::size_t b,
                     std::span<const Request> pool);

}  // namespace semsched
