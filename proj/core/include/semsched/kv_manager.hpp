// Copyright 2026 The semsched Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "semsched/cost_model.hpp"
#include "semsched/queues.hpp"
#include "semsched/request.hpp"

namespace semsched {

// Device KV capacity in token slots (one slot per token).
struct DeviceMemory {
  Tokens capacity = 0;
  Tokens used = 0;

  Tokens free() const { return capacity - used; }
};

enum class PrefillAction { Offload, Discard };

std::string_view to_string(PrefillAction action);

struct EvictionDecision {
  RequestId victim = 0;
  PrefillAction prefill = PrefillAction::Offload;
  Tokens prefill_tokens = 0;   // prompt tokens that were resident
  Tokens decode_saved = 0;     // generated tokens offloaded
  Tokens decode_discarded = 0; // generated tokens left for recomputation
};

struct EvictionOptions {
  // Drop saved decode KV when the prompt KV it depends on is discarded.
  bool discard_dependent_decode = true;
};

// Additional slots r needs through its predicted completion:
// prompt_len + predicted length - resident tokens, floored at 0.
Tokens estimate_kv_size(const Request& r);

// Decides and applies the cache-or-recompute resolution for an evicted
// request: prompt KV is offloaded when reloading beats recomputing, decode
// KV keeps optimal_save_tokens() tokens. Leaves the victim in
// EvictedOffloaded (something saved) or EvictedDiscarded. Does not touch
// DeviceMemory.
EvictionDecision should_recompute(Request& victim, const GpuProfile& p,
                                  const EvictionOptions& options = {});

struct EvictionOutcome {
  bool admitted = false;  // false: space could not be made for the request
  std::vector<EvictionDecision> decisions;
};

// Called for each victim after its decision has been applied and it has been
// re-queued; `remaining_before` is the victim's f_t prior to eviction.
using EvictionObserver =
    std::function<void(const EvictionDecision&, const Request& victim, Seconds remaining_before)>;

// Evicts victims from `resident` until `required` more slots fit next to
// `mem.used`. Each victim is removed from `waiting`, resolved with
// should_recompute(), gets a fresh f_t, returns to Waiting and is re-inserted
// into `waiting` under key(victim). `r` is never a victim (it must not be in
// `resident`). Stops with admitted = false once `resident` is exhausted.
EvictionOutcome priority_based_eviction(const Request& r, Tokens required,
                                        EvictionQueue& resident, DispatchQueue& waiting,
                                        DeviceMemory& mem, std::span<Request> pool,
                                        const GpuProfile& p, const KeyFunction& key,
                                        const EvictionOptions& options = {},
                                        const EvictionObserver& observer = {});

// Same, with required = estimate_kv_size(r).
EvictionOutcome priority_based_eviction(const Request& r, EvictionQueue& resident,
                                        DispatchQueue& waiting, DeviceMemory& mem,
                                        std::span<Request> pool, const GpuProfile& p,
                                        const KeyFunction& key,
                                        const EvictionOptions& options = {});

}  // namespace semsched
