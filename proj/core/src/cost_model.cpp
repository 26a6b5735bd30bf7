// Copyright 2026 The semsched Authors
// SPDX-License-Identifier: Apache-2.0

#include "semsched/cost_model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace semsched {
namespace {

const std::array<GpuProfile, 3> kBuiltinProfiles = {{
    {"a5000_qwen7b", 1.859e-9, 2.175e-4, 2.117e-6, 2.727e-2, 3e-4, 3e-4},
    {"a100_qwen4b", 1.466e-2, 1.052e-4, 5.913e-9, 1.196e-2, 1e-4, 1e-4},
    {"a100_qwen7b", 5.135e-7, 1.481e-4, 1.349e-8, 1.330e-2, 1e-4, 1e-4},
}};

// Recomputing k discarded decode tokens, charged at decode rates from the
// prompt boundary.
double recompute_decode(Tokens n, Tokens k, const GpuProfile& p) {
  const double kd = static_cast<double>(k);
  return p.gamma1 * (0.5 * kd * kd + static_cast<double>(n) * kd + 0.5 * kd) + p.gamma2 * kd;
}

}  // namespace

void validate(const GpuProfile& p) {
  for (double c : {p.alpha1, p.alpha2, p.gamma1, p.gamma2, p.beta_load, p.beta_save}) {
    if (!std::isfinite(c) || c < 0.0) {
      throw std::invalid_argument("profile '" + p.name + "': coefficients must be finite and >= 0");
    }
  }
  if (p.alpha1 + p.alpha2 <= 0.0) {
    throw std::invalid_argument("profile '" + p.name + "': alpha1 + alpha2 must be > 0");
  }
  if (p.gamma1 + p.gamma2 <= 0.0) {
    throw std::invalid_argument("profile '" + p.name + "': gamma1 + gamma2 must be > 0");
  }
}

std::span<const GpuProfile> builtin_profiles() { return kBuiltinProfiles; }

const GpuProfile& builtin_profile(std::string_view name) {
  for (const auto& p : kBuiltinProfiles) {
    if (p.name == name) return p;
  }
  throw std::out_of_range("unknown GPU profile '" + std::string(name) + "'");
}

Seconds prefill_time(Tokens n, const GpuProfile& p) {
  const double nd = static_cast<double>(n);
  return p.alpha1 * nd * nd + p.alpha2 * nd;
}

Seconds decode_step_time(Tokens n, Tokens j, const GpuProfile& p) {
  // The j-th generated token sits at context position n + j; summing this
  // over j = 1..m gives decode_total_time exactly.
  return p.gamma1 * static_cast<double>(n + j) + p.gamma2;
}

Seconds decode_total_time(Tokens n, Tokens m, const GpuProfile& p) {
  return recompute_decode(n, m, p);
}

Seconds reload_time(Tokens tokens, const GpuProfile& p) {
  return p.beta_load * static_cast<double>(tokens);
}

bool should_cache_prefill(Tokens n, const GpuProfile& p) {
  return p.beta_load < p.alpha1 * static_cast<double>(n) + p.alpha2;
}

Seconds resume_cost(Tokens n, Tokens m_done, Tokens m_saved, const GpuProfile& p) {
  if (m_saved < 0 || m_saved > m_done) {
    throw std::invalid_argument("resume_cost: m_saved must lie in [0, m_done]");
  }
  return p.beta_load * static_cast<double>(m_saved) + recompute_decode(n, m_done - m_saved, p);
}

Tokens optimal_save_tokens(Tokens n, Tokens m_done, const GpuProfile& p) {
  if (m_done <= 0) return 0;
  if (p.gamma1 == 0.0) {
    // Cost is linear in m_saved; equality is a flat cost and ties go high.
    return p.beta_load <= p.gamma2 ? m_done : 0;
  }
  // Stationary point of the resume cost in the number of recomputed tokens.
  const double k_star =
      (p.beta_load - p.gamma1 * static_cast<double>(n) - 0.5 * p.gamma1 - p.gamma2) / p.gamma1;
  const double x = static_cast<double>(m_done) - k_star;
  if (x <= 0.0) return 0;
  if (x >= static_cast<double>(m_done)) return m_done;

  // The cost is a convex parabola in m_saved, so the integer optimum is
  // floor(x) or ceil(x). One extra neighbour on each side absorbs rounding of
  // x when the two candidates are (nearly) tied.
  const auto lo = static_cast<Tokens>(std::floor(x));
  Tokens best = -1;
  double best_cost = 0.0;
  for (Tokens s = std::max<Tokens>(0, lo - 1); s <= std::min(m_done, lo + 2); ++s) {
    const double c = resume_cost(n, m_done, s, p);
    if (best < 0 || c <= best_cost) {
      best = s;
      best_cost = c;
    }
  }
  return best;
}

Seconds restore_time(const Request& r, const GpuProfile& p) {
  return reload_time(r.kv_host_tokens, p) + prefill_time(r.prompt_len - r.prefilled_tokens, p) +
         recompute_decode(r.prompt_len, r.recompute_tokens, p);
}

Seconds estimate_remaining_time(const Request& r, const GpuProfile& p) {
  if (r.completed()) {
    throw std::invalid_argument("estimate_remaining_time: request " + std::to_string(r.id) +
                                " is completed");
  }
  const Tokens left = std::max<Tokens>(1, r.predicted_bucket.representative_len - r.decoded_tokens);
  return restore_time(r, p) + decode_total_time(r.prompt_len + r.decoded_tokens, left, p);
}

}  // namespace semsched
