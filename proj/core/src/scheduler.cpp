// Copyright 2026 The semsched Authors
// SPDX-License-Identifier: Apache-2.0

#include "semsched/scheduler.hpp"

#include <algorithm>
#include <stdexcept>

namespace semsched {
namespace {

bool by_key(const Candidate& a, const Candidate& b) { return a.key < b.key; }

const Request& at(std::span<const Request> pool, RequestId id) {
  return pool[static_cast<std::size_t>(id)];
}

// Sorts `merged`, keeps the first b as the batch and returns the rest to the
// heap.
Batch take_prefix(std::vector<Candidate> merged, std::size_t b, DispatchQueue& heap,
                  std::span<const Request> pool) {
  std::sort(merged.begin(), merged.end(), by_key);
  Batch batch;
  batch.kind = BatchKind::Decode;
  const std::size_t take = std::min(b, merged.size());
  for (std::size_t i = 0; i < take; ++i) {
    batch.members.push_back(merged[i].id);
    if (at(pool, merged[i].id).needs_prefill()) batch.kind = BatchKind::Prefill;
  }
  heap.push_back(std::span<const Candidate>(merged).subspan(take));
  return batch;
}

std::vector<Candidate> keyed(std::span<const RequestId> ids, std::span<const Request> pool,
                             const KeyFunction& key) {
  std::vector<Candidate> out;
  out.reserve(ids.size());
  for (RequestId id : ids) out.push_back({id, key(at(pool, id))});
  return out;
}

}  // namespace

std::string_view to_string(Policy policy) {
  switch (policy) {
    case Policy::Semantic: return "semantic";
    case Policy::FCFS: return "fcfs";
    case Policy::SJF: return "sjf";
    case Policy::HPJF: return "hpjf";
  }
  return "unknown";
}

std::optional<Policy> parse_policy(std::string_view name) {
  for (Policy p : {Policy::Semantic, Policy::FCFS, Policy::SJF, Policy::HPJF}) {
    if (to_string(p) == name) return p;
  }
  return std::nullopt;
}

std::string_view to_string(BatchKind kind) {
  return kind == BatchKind::Prefill ? "prefill" : "decode";
}

PriorityKey dispatch_key(Policy policy, const Request& r) {
  switch (policy) {
    case Policy::Semantic:
      return obtain_priority(r.predicted_urgency, r.remaining_time, r.arrival_time, r.id);
    case Policy::FCFS:
      return PriorityKey{r.started ? 0 : 1, 0.0, r.arrival_time, r.id};
    case Policy::SJF:
      return PriorityKey{0, r.remaining_time, r.arrival_time, r.id};
    case Policy::HPJF:
      return PriorityKey{r.predicted_urgency.rank, 0.0, r.arrival_time, r.id};
  }
  throw std::invalid_argument("dispatch_key: unknown policy");
}

KeyFunction key_function(Policy policy) {
  return [policy](const Request& r) { return dispatch_key(policy, r); };
}

std::vector<Candidate> extract_top_b(DispatchQueue& heap, ArrivalBuffer& buffer, std::size_t b,
                                     std::span<const Request> pool, const KeyFunction& key) {
  if (b == 0) throw std::invalid_argument("extract_top_b: batch size must be >= 1");
  drain_buffer(buffer, heap, pool, key);
  std::vector<Candidate> out;
  out.reserve(std::min(b, heap.size()));
  while (out.size() < b) {
    auto top = heap.pop();
    if (!top) break;
    out.push_back(*top);
  }
  return out;
}

Batch stage_aware_schedule(DispatchQueue& heap, ArrivalBuffer& buffer,
                           std::span<const RequestId> ongoing, std::size_t b,
                           std::span<const Request> pool, const KeyFunction& key) {
  std::vector<Candidate> candidates = extract_top_b(heap, buffer, b, pool, key);
  std::vector<Candidate> merged = keyed(ongoing, pool, key);
  if (candidates.empty() && merged.empty()) return {};

  const Candidate* best = nullptr;
  for (const auto* set : {&candidates, &merged}) {
    for (const auto& c : *set) {
      if (best == nullptr || c.key < best->key) best = &c;
    }
  }

  if (at(pool, best->id).needs_prefill()) {
    merged.insert(merged.end(), candidates.begin(), candidates.end());
  } else {
    for (const auto& c : candidates) {
      if (at(pool, c.id).needs_prefill()) {
        heap.push(c.id, c.key);
      } else {
        merged.push_back(c);
      }
    }
  }
  return take_prefix(std::move(merged), b, heap, pool);
}

Batch baseline_policy(DispatchQueue& heap, ArrivalBuffer& buffer,
                      std::span<const RequestId> ongoing, std::size_t b,
                      std::span<const Request> pool, const KeyFunction& key) {
  std::vector<Candidate> merged = extract_top_b(heap, buffer, b, pool, key);
  std::vector<Candidate> current = keyed(ongoing, pool, key);
  merged.insert(merged.end(), current.begin(), current.end());
  return take_prefix(std::move(merged), b, heap, pool);
}

Batch schedule_round(Policy policy, DispatchQueue& heap, ArrivalBuffer& buffer,
                     std::span<const RequestId> ongoing, std::size_t b,
                     std::span<const Request> pool) {
  const KeyFunction key = key_function(policy);
  if (policy == Policy::Semantic) {
    return stage_aware_schedule(heap, buffer, ongoing, b, pool, key);
  }
  return baseline_policy(heap, buffer, ongoing, b, pool, key);
}

}  // namespace semsched
