// Copyright 2026 The semsched Authors
// SPDX-License-Identifier: Apache-2.0

#include "semsched/cost_model.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "oracles.hpp"
#include "test_util.hpp"

namespace semsched {
namespace {

using testing::make_request;
using testing::synthetic_profile;

const GpuProfile& qwen7b() { return builtin_profile("a100_qwen7b"); }
const GpuProfile& qwen4b() { return builtin_profile("a100_qwen4b"); }
const GpuProfile& a5000() { return builtin_profile("a5000_qwen7b"); }

TEST(Profiles, BuiltinsValidateAndResolve) {
  EXPECT_EQ(builtin_profiles().size(), 3u);
  for (const GpuProfile& p : builtin_profiles()) EXPECT_NO_THROW(validate(p));
  EXPECT_THROW(builtin_profile("h100_unknown"), std::out_of_range);
}

TEST(Profiles, NegativeCoefficientRejected) {
  GpuProfile p = qwen7b();
  p.gamma2 = -1.0;
  EXPECT_THROW(validate(p), std::invalid_argument);
}

TEST(PrefillTime, Examples) {
  EXPECT_EQ(prefill_time(0, qwen7b()), 0.0);
  EXPECT_NEAR(prefill_time(100, qwen7b()), 0.019945, 1e-12);
  for (const GpuProfile& p : builtin_profiles()) {
    EXPECT_GE(prefill_time(200, p), 2 * prefill_time(100, p));
  }
}

TEST(DecodeStepTime, Examples) {
  EXPECT_NEAR(decode_step_time(100, 1, qwen7b()), 0.0133013, 1e-7);
  const GpuProfile flat = synthetic_profile(0.5, 0.0, 0.05);
  EXPECT_EQ(decode_step_time(10, 1, flat), 0.05);
  EXPECT_EQ(decode_step_time(10, 400, flat), 0.05);
  for (Tokens j = 1; j < 100; ++j) {
    EXPECT_LE(decode_step_time(50, j, qwen7b()), decode_step_time(50, j + 1, qwen7b()));
  }
}

TEST(DecodeTotalTime, Examples) {
  EXPECT_EQ(decode_total_time(10, 0, qwen7b()), 0.0);
  EXPECT_NEAR(decode_total_time(10, 5, synthetic_profile(0.5, 0.01, 0.05)), 0.9, 1e-12);
}

TEST(DecodeTotalTime, EqualsStepSum) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<Tokens> len(0, 64);
  for (int i = 0; i < 500; ++i) {
    const Tokens n = len(rng);
    const Tokens m = len(rng);
    for (const GpuProfile& p : builtin_profiles()) {
      const double closed = decode_total_time(n, m, p);
      double steps = 0.0;
      for (Tokens j = 1; j <= m; ++j) steps += decode_step_time(n, j, p);
      EXPECT_NEAR(closed, oracle::decode_sum(n, m, p), 1e-9 * std::max(1.0, closed));
      EXPECT_NEAR(closed, steps, 1e-9 * std::max(1.0, closed));
    }
  }
}

TEST(ReloadTime, Examples) {
  EXPECT_EQ(reload_time(0, qwen4b()), 0.0);
  EXPECT_NEAR(reload_time(100, qwen4b()), 0.01, 1e-15);
  EXPECT_NEAR(reload_time(100, a5000()), 0.03, 1e-15);
}

TEST(ShouldCachePrefill, AlwaysOnA100Qwen7b) {
  for (Tokens n : {1, 10, 100, 1000, 100000}) EXPECT_TRUE(should_cache_prefill(n, qwen7b()));
}

TEST(ShouldCachePrefill, A5000RecomputesShortPrompts) {
  EXPECT_FALSE(should_cache_prefill(1000, a5000()));
  // Crossover where alpha1 * n + alpha2 reaches beta_load: ~4.44e4 tokens.
  const GpuProfile& p = a5000();
  const double crossover = (p.beta_load - p.alpha2) / p.alpha1;
  EXPECT_NEAR(crossover, 4.44e4, 100.0);
  const auto below = static_cast<Tokens>(std::floor(crossover)) - 1;
  EXPECT_FALSE(should_cache_prefill(below, p));
  EXPECT_TRUE(should_cache_prefill(below + 3, p));
}

TEST(ResumeCost, PureReloadAndPureRecompute) {
  const GpuProfile p = synthetic_profile();
  EXPECT_NEAR(resume_cost(10, 50, 50, p), 0.5 * 50, 1e-12);
  EXPECT_NEAR(resume_cost(10, 50, 0, p), decode_total_time(10, 50, p), 1e-12);
}

TEST(ResumeCost, HandEvaluatedPoints) {
  // beta*s + g1*(k^2/2 + n*k + k/2) + g2*k with k = 50 - s.
  const GpuProfile p = synthetic_profile();
  EXPECT_NEAR(resume_cost(10, 50, 15, p), 7.5 + 0.01 * (612.5 + 350 + 17.5) + 1.75, 1e-12);
  EXPECT_NEAR(resume_cost(10, 50, 16, p), 8.0 + 0.01 * (578 + 340 + 17) + 1.70, 1e-12);
  EXPECT_NEAR(resume_cost(10, 50, 15, p), oracle::resume(10, 50, 15, p), 1e-12);
}

TEST(ResumeCost, RejectsOutOfRange) {
  EXPECT_THROW(resume_cost(10, 5, 6, qwen7b()), std::invalid_argument);
  EXPECT_THROW(resume_cost(10, 5, -1, qwen7b()), std::invalid_argument);
}

TEST(OptimalSaveTokens, CheapReloadSavesEverything) {
  for (Tokens n : {1, 100, 500}) {
    for (Tokens m : {0, 1, 37, 512}) EXPECT_EQ(optimal_save_tokens(n, m, qwen7b()), m);
  }
}

TEST(OptimalSaveTokens, InteriorOptimumTiesToLarger) {
  // k* = 34.5 so the optimum straddles 15 and 16; both cost 19.05.
  const GpuProfile p = synthetic_profile();
  EXPECT_EQ(optimal_save_tokens(10, 50, p), 16);
  EXPECT_EQ(oracle::argmin_save(10, 50, p), 16);
}

TEST(OptimalSaveTokens, FlatSlopeFollowsBetaVersusGamma2) {
  EXPECT_EQ(optimal_save_tokens(10, 40, synthetic_profile(0.01, 0.0, 0.05)), 40);
  EXPECT_EQ(optimal_save_tokens(10, 40, synthetic_profile(0.09, 0.0, 0.05)), 0);
  EXPECT_EQ(optimal_save_tokens(10, 40, synthetic_profile(0.05, 0.0, 0.05)), 40);
}

TEST(OptimalSaveTokens, MatchesExhaustiveArgmin) {
  std::mt19937_64 rng(2026);
  std::uniform_int_distribution<Tokens> len(0, 256);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 400; ++i) {
    const GpuProfile p = synthetic_profile(unit(rng), 1e-4 + 1e-2 * unit(rng), 0.05 * unit(rng));
    const Tokens n = len(rng);
    const Tokens m = len(rng);
    EXPECT_EQ(optimal_save_tokens(n, m, p), oracle::argmin_save(n, m, p))
        << "n=" << n << " m=" << m << " beta=" << p.beta_load << " g1=" << p.gamma1
        << " g2=" << p.gamma2;
  }
}

TEST(EstimateRemainingTime, FreshRequestIsPrefillPlusDecode) {
  const Request r = make_request(0, 0, 100, 150);
  const Tokens rep = r.predicted_bucket.representative_len;
  EXPECT_NEAR(estimate_remaining_time(r, qwen7b()),
              prefill_time(100, qwen7b()) + decode_total_time(100, rep, qwen7b()), 1e-12);
}

TEST(EstimateRemainingTime, OverrunFloorsAtOneStep) {
  Request r = make_request(0, 0, 100, 400);
  r.predicted_bucket = LengthBucket{0, 50};
  r.stage = Stage::Decoding;
  r.prefilled_tokens = 100;
  r.kv_device_tokens = 100 + 120;
  r.decoded_tokens = 120;
  EXPECT_NEAR(estimate_remaining_time(r, qwen7b()), decode_step_time(220, 1, qwen7b()), 1e-15);
}

TEST(EstimateRemainingTime, EvictedRequestAddsRestoreWork) {
  Request r = make_request(0, 0, 100, 150);
  r.stage = Stage::Waiting;
  r.prefilled_tokens = 100;
  r.decoded_tokens = 40;
  r.kv_host_tokens = 100 + 30;
  r.recompute_tokens = 10;
  const GpuProfile& p = qwen7b();
  const double restore = reload_time(130, p) + decode_total_time(100, 10, p);
  EXPECT_NEAR(restore_time(r, p), restore, 1e-15);
  const Tokens left = r.predicted_bucket.representative_len - 40;
  EXPECT_NEAR(estimate_remaining_time(r, p), restore + decode_total_time(140, left, p), 1e-12);
}

TEST(EstimateRemainingTime, CompletedRequestRejected) {
  Request r = make_request(0, 0, 10, 10);
  r.stage = Stage::Completed;
  EXPECT_THROW(estimate_remaining_time(r, qwen7b()), std::invalid_argument);
}

}  // namespace
}  // namespace semsched
