// Copyright 2026 The semsched Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <string>
#include <string_view>

#include "semsched/request.hpp"

namespace semsched {

// Timing coefficients of one model/GPU pairing.
//   prefill(n)      = alpha1 * n^2 + alpha2 * n
//   decode step j   = gamma1 * (n + j) + gamma2
//   reload(tokens)  = beta_load * tokens
struct GpuProfile {
  std::string name;
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double beta_load = 0.0;
  double beta_save = 0.0;
};

// Throws std::invalid_argument if a coefficient is negative/non-finite or
// either the prefill or decode model is identically zero.
void validate(const GpuProfile& p);

std::span<const GpuProfile> builtin_profiles();

// Throws std::out_of_range for an unknown name.
const GpuProfile& builtin_profile(std::string_view name);

Seconds prefill_time(Tokens n, const GpuProfile& p);

// Time to decode the j-th output token (j >= 1) after a prompt of n tokens.
Seconds decode_step_time(Tokens n, Tokens j, const GpuProfile& p);

// Closed form of sum_{j=1..m} decode_step_time(n, j).
Seconds decode_total_time(Tokens n, Tokens m, const GpuProfile& p);

Seconds reload_time(Tokens tokens, const GpuProfile& p);

// True when reloading n offloaded prompt tokens is cheaper than recomputing
// them: beta_load < alpha1 * n + alpha2.
bool should_cache_prefill(Tokens n, const GpuProfile& p);

// Time to restore the decode KV of a request evicted after m_done generated
// tokens when m_saved of them were offloaded and the rest are recomputed.
// Throws std::invalid_argument if m_saved is outside [0, m_done].
Seconds resume_cost(Tokens n, Tokens m_done, Tokens m_saved, const GpuProfile& p);

// Integer minimiser of resume_cost over m_saved in [0, m_done]; ties go to
// the larger m_saved.
Tokens optimal_save_tokens(Tokens n, Tokens m_done, const GpuProfile& p);

// f_t: host reload + missing prefill + discarded-decode recompute + decode of
// the predicted remainder (at least one token). Uses the predicted length only.
// Throws std::invalid_argument for a completed request.
Seconds estimate_remaining_time(const Request& r, const GpuProfile& p);

// Device time needed before a waiting request can decode again.
Seconds restore_time(const Request& r, const GpuProfile& p);

}  // namespace semsched
