// Copyright 2026 The semsched Authors
// SPDX-License-Identifier: Apache-2.0

#include "semsched/kv_manager.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace semsched {

std::string_view to_string(PrefillAction action) {
  return action == PrefillAction::Offload ? "offload" : "discard";
}

Tokens estimate_kv_size(const Request& r) {
  return std::max<Tokens>(
      0, r.prompt_len + r.predicted_bucket.representative_len - r.kv_device_tokens);
}

EvictionDecision should_recompute(Request& victim, const GpuProfile& p,
                                  const EvictionOptions& options) {
  if (victim.kv_device_tokens <= 0) {
    throw std::invalid_argument("should_recompute: request " + std::to_string(victim.id) +
                                " has no device KV");
  }
  EvictionDecision d;
  d.victim = victim.id;
  d.prefill_tokens = victim.prefilled_tokens;

  // Only the device-resident part is at stake; host copies and pending
  // recomputation from earlier evictions carry over unchanged.
  const Tokens resident_decode = victim.decoded_tokens - victim.recompute_tokens;
  const bool offload_prefill =
      victim.prefilled_tokens > 0 && should_cache_prefill(victim.prefilled_tokens, p);
  d.prefill = offload_prefill ? PrefillAction::Offload : PrefillAction::Discard;

  Tokens saved = optimal_save_tokens(victim.prompt_len, resident_decode, p);
  if (!offload_prefill && options.discard_dependent_decode) saved = 0;
  d.decode_saved = saved;
  d.decode_discarded = resident_decode - saved;

  victim.kv_device_tokens = 0;
  if (offload_prefill) {
    victim.kv_host_tokens = victim.prefilled_tokens + saved;
  } else {
    victim.prefilled_tokens = 0;
    victim.kv_host_tokens = saved;
  }
  victim.recompute_tokens += d.decode_discarded;
  victim.transition(victim.kv_host_tokens > 0 ? Stage::EvictedOffloaded
                                              : Stage::EvictedDiscarded);
  return d;
}

EvictionOutcome priority_based_eviction(const Request& r, Tokens required,
                                        EvictionQueue& resident, DispatchQueue& waiting,
                                        DeviceMemory& mem, std::span<Request> pool,
                                        const GpuProfile& p, const KeyFunction& key,
                                        const EvictionOptions& options,
                                        const EvictionObserver& observer) {
  if (resident.contains(r.id)) {
    throw std::invalid_argument("priority_based_eviction: request " + std::to_string(r.id) +
                                " must not be an eviction candidate of itself");
  }
  EvictionOutcome out;
  while (required + mem.used > mem.capacity) {
    auto top = resident.pop();
    if (!top) return out;
    Request& victim = pool[static_cast<std::size_t>(top->id)];
    waiting.erase(victim.id);
    mem.used -= victim.kv_device_tokens;
    const Seconds before = victim.remaining_time;
    EvictionDecision d = should_recompute(victim, p, options);
    victim.remaining_time = estimate_remaining_time(victim, p);
    victim.transition(Stage::Waiting);
    waiting.push(victim.id, key(victim));
    if (observer) observer(d, victim, before);
    out.decisions.push_back(d);
  }
  out.admitted = true;
  return out;
}

EvictionOutcome priority_based_eviction(const Request& r, EvictionQueue& resident,
                                        DispatchQueue& waiting, DeviceMemory& mem,
                                        std::span<Request> pool, const GpuProfile& p,
                                        const KeyFunction& key, const EvictionOptions& options) {
  return priority_based_eviction(r, estimate_kv_size(r), resident, waiting, mem, pool, p, key,
                                 options);
}

}  // namespace semsched
