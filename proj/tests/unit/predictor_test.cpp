// Copyright 2026 The semsched Authors
// SPDX-License-Identifier: Apache-2.0

#include "semsched/predictor.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "semsched/log.hpp"
#include "test_util.hpp"

namespace semsched {
namespace {

using testing::make_request;

TEST(PredictUrgency, ZeroErrorIsIdentity) {
  std::mt19937_64 rng(1);
  for (int u = 0; u < 5; ++u) {
    for (int i = 0; i < 100; ++i) EXPECT_EQ(predict_urgency(UrgencyLevel{u}, {}, 5, rng).rank, u);
  }
}

TEST(PredictUrgency, FullErrorClampsToFarEnd) {
  const ErrorModel em{1.0};
  EXPECT_EQ(predict_urgency(UrgencyLevel{0}, em, 5, PerturbationDraw{0.0, true}).rank, 4);
  // The negative direction clamps back to 0, so the sign flips.
  EXPECT_EQ(predict_urgency(UrgencyLevel{0}, em, 5, PerturbationDraw{0.0, false}).rank, 4);
}

TEST(PredictUrgency, MonteCarloRateAndDistance) {
  const ErrorModel em{0.2};
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> level(0, 4);
  constexpr int kDraws = 100000;
  int perturbed = 0;
  double distance = 0.0;
  for (int i = 0; i < kDraws; ++i) {
    const int truth = level(rng);
    const int got = predict_urgency(UrgencyLevel{truth}, em, 5, rng).rank;
    if (got != truth) {
      ++perturbed;
      distance += std::abs(got - truth) / 5.0;
    }
  }
  EXPECT_NEAR(perturbed / static_cast<double>(kDraws), 0.2, 0.01);
  EXPECT_NEAR(distance / perturbed, 0.2, 1e-12);
}

TEST(ErrorModel, RateOutsideUnitIntervalRejected) {
  EXPECT_THROW(validate(ErrorModel{1.5}), std::invalid_argument);
  EXPECT_THROW(validate(ErrorModel{-0.1}), std::invalid_argument);
}

TEST(Bucketize, Examples) {
  EXPECT_EQ(bucketize(0, 5, 500).index, 0);
  EXPECT_EQ(bucketize(250, 5, 500).index, 2);
  EXPECT_EQ(bucketize(499, 5, 500).index, 4);
  EXPECT_EQ(bucketize(500, 5, 500).index, 4);
  EXPECT_EQ(bucketize(0, 5, 500).representative_len, 50);
  EXPECT_EQ(bucketize(250, 5, 500).representative_len, 250);
}

TEST(Bucketize, OverflowClampsWithWarning) {
  std::vector<std::string> warnings;
  auto previous = set_warning_sink([&](std::string_view m) { warnings.emplace_back(m); });
  EXPECT_EQ(bucketize(900, 5, 500).index, 4);
  set_warning_sink(previous);
  EXPECT_EQ(warnings.size(), 1u);
}

TEST(Bucketize, MonotoneWithIntervalPreimages) {
  int prev = 0;
  int changes = 0;
  for (Tokens len = 0; len <= 500; ++len) {
    const int idx = bucketize(len, 5, 500).index;
    EXPECT_GE(idx, prev);
    changes += idx != prev;
    prev = idx;
  }
  EXPECT_EQ(changes, 4);
}

TEST(PredictLength, ZeroErrorGivesTrueBucket) {
  std::mt19937_64 rng(3);
  for (Tokens len : {1, 99, 100, 250, 500}) {
    EXPECT_EQ(predict_length_bucket(len, {}, 5, 500, rng), bucketize(len, 5, 500));
  }
}

TEST(PredictLength, HalfErrorDisplacesBy250) {
  const ErrorModel em{0.5};
  EXPECT_EQ(perturb_length(100, em, 500, PerturbationDraw{0.0, true}), 350);
  EXPECT_EQ(perturb_length(100, em, 500, PerturbationDraw{0.0, false}), 0);
  EXPECT_EQ(predict_length_bucket(100, em, 5, 500, PerturbationDraw{0.0, true}).index, 3);
  EXPECT_EQ(predict_length_bucket(100, em, 5, 500, PerturbationDraw{0.0, false}).index, 0);
  EXPECT_EQ(perturb_length(100, em, 500, PerturbationDraw{0.9, true}), 100);
}

TEST(PredictLength, AllRequestsModeUsesFullRange) {
  const ErrorModel em{0.3, DistanceMode::AllRequests};
  EXPECT_EQ(perturb_length(100, em, 500, PerturbationDraw{0.0, true}), 500);
}

TEST(RequestRng, DeterministicAndDistinctStreams) {
  auto a = request_rng(5, 10, 1);
  auto b = request_rng(5, 10, 1);
  auto c = request_rng(5, 10, 2);
  auto d = request_rng(5, 11, 1);
  const auto va = a();
  EXPECT_EQ(va, b());
  EXPECT_NE(va, c());
  EXPECT_NE(va, d());
}

std::vector<Request> arrivals(const std::vector<Seconds>& times) {
  std::vector<Request> out;
  for (std::size_t i = 0; i < times.size(); ++i) {
    out.push_back(make_request(static_cast<RequestId>(i), 0, 10, 10, times[i]));
  }
  return out;
}

TEST(Pipeline, ZeroLatencyReadyAtArrival) {
  const auto reqs = arrivals({0.0, 0.5, 0.5, 2.0});
  for (auto strategy : {PredictorStrategy::ImmediateProcessing}) {
    PredictorConfig cfg{0.0, 64, strategy};
    for (const auto& r : predictor_pipeline(reqs, cfg)) {
      EXPECT_EQ(r.ready_time, reqs[static_cast<std::size_t>(r.id)].arrival_time);
    }
  }
  PredictorConfig one{0.0, 1, PredictorStrategy::FullBatching};
  for (const auto& r : predictor_pipeline(reqs, one)) {
    EXPECT_EQ(r.ready_time, reqs[static_cast<std::size_t>(r.id)].arrival_time);
  }
}

TEST(Pipeline, FullBatchingFillsThenFires) {
  const auto reqs = arrivals({0.0, 1.0, 2.0, 3.0});
  const auto ready = predictor_pipeline(reqs, {0.25, 4, PredictorStrategy::FullBatching});
  ASSERT_EQ(ready.size(), 4u);
  for (const auto& r : ready) EXPECT_DOUBLE_EQ(r.ready_time, 3.25);
}

TEST(Pipeline, FullBatchingFlushesResidual) {
  const auto reqs = arrivals({0.0, 1.0, 2.0, 3.0, 4.0});
  const auto ready = predictor_pipeline(reqs, {0.5, 2, PredictorStrategy::FullBatching});
  ASSERT_EQ(ready.size(), 5u);
  EXPECT_DOUBLE_EQ(ready[0].ready_time, 1.5);
  EXPECT_DOUBLE_EQ(ready[2].ready_time, 3.5);
  EXPECT_DOUBLE_EQ(ready[4].ready_time, 4.5);
}

TEST(Pipeline, ImmediateSplitsLargeGroups) {
  std::vector<Seconds> times(100, 2.0);
  const auto reqs = arrivals(times);
  const auto ready = predictor_pipeline(reqs, {0.1, 64, PredictorStrategy::ImmediateProcessing});
  ASSERT_EQ(ready.size(), 100u);
  for (std::size_t i = 0; i < 64; ++i) EXPECT_DOUBLE_EQ(ready[i].ready_time, 2.1);
  for (std::size_t i = 64; i < 100; ++i) EXPECT_DOUBLE_EQ(ready[i].ready_time, 2.2);
}

TEST(Pipeline, StrategyNames) {
  EXPECT_EQ(parse_strategy("immediate"), PredictorStrategy::ImmediateProcessing);
  EXPECT_EQ(parse_strategy("full_batching"), PredictorStrategy::FullBatching);
  EXPECT_FALSE(parse_strategy("lazy"));
  EXPECT_THROW(validate(PredictorConfig{-1.0, 4}), std::invalid_argument);
  EXPECT_THROW(validate(PredictorConfig{0.0, 0}), std::invalid_argument);
}

}  // namespace
}  // namespace semsched
