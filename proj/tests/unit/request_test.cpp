// Copyright 2026 The semsched Authors
// SPDX-License-Identifier: Apache-2.0

#include "semsched/request.hpp"

#include <gtest/gtest.h>

#include <stdexcept>

namespace semsched {
namespace {

TEST(Urgency, RankZeroIsMostUrgent) {
  EXPECT_LT(make_urgency(0), make_urgency(1));
  EXPECT_EQ(make_urgency(4).rank, 4);
}

TEST(Urgency, OutOfRangeRejected) {
  EXPECT_THROW(make_urgency(5, 5), std::out_of_range);
  EXPECT_THROW(make_urgency(-1, 5), std::out_of_range);
}

TEST(Stage, LegalLifecycle) {
  Request r;
  r.transition(Stage::Prefilling);
  r.transition(Stage::Decoding);
  r.transition(Stage::EvictedOffloaded);
  r.transition(Stage::Waiting);
  r.transition(Stage::Prefilling);
  r.transition(Stage::EvictedDiscarded);
  r.transition(Stage::Waiting);
  r.transition(Stage::Prefilling);
  r.transition(Stage::Decoding);
  r.transition(Stage::Completed);
  EXPECT_TRUE(r.completed());
}

TEST(Stage, IllegalTransitionsThrow) {
  Request r;
  EXPECT_THROW(r.transition(Stage::Decoding), std::logic_error);
  r.stage = Stage::Completed;
  for (Stage s : {Stage::Waiting, Stage::Prefilling, Stage::Decoding, Stage::EvictedOffloaded,
                  Stage::EvictedDiscarded}) {
    EXPECT_FALSE(is_legal_transition(Stage::Completed, s));
    EXPECT_THROW(r.transition(s), std::logic_error);
  }
  EXPECT_FALSE(is_legal_transition(Stage::Waiting, Stage::Completed));
}

TEST(Stage, NeedsPrefillOnlyWhenWaiting) {
  Request r;
  EXPECT_TRUE(r.needs_prefill());
  r.transition(Stage::Prefilling);
  EXPECT_FALSE(r.needs_prefill());
}

TEST(Request, CountersConsistent) {
  Request r;
  r.prompt_len = 10;
  r.true_output_len = 5;
  EXPECT_TRUE(counters_consistent(r));
  r.decoded_tokens = 6;
  EXPECT_FALSE(counters_consistent(r));
}

TEST(PriorityKey, UrgencyFirst) {
  const auto a = obtain_priority(UrgencyLevel{0}, 9.0, 5.0, 2);
  const auto b = obtain_priority(UrgencyLevel{1}, 0.1, 0.0, 1);
  EXPECT_LT(a, b);
}

TEST(PriorityKey, RemainingTimeBreaksUrgencyTie) {
  const auto a = obtain_priority(UrgencyLevel{2}, 1.0, 0.0, 1);
  const auto b = obtain_priority(UrgencyLevel{2}, 3.0, 0.0, 2);
  EXPECT_LT(a, b);
}

TEST(PriorityKey, ArrivalThenIdBreakRemainingTie) {
  EXPECT_LT(obtain_priority(UrgencyLevel{1}, 1.0, 0.0, 9),
            obtain_priority(UrgencyLevel{1}, 1.0, 1.0, 0));
  EXPECT_LT(obtain_priority(UrgencyLevel{1}, 1.0, 1.0, 3),
            obtain_priority(UrgencyLevel{1}, 1.0, 1.0, 4));
}

TEST(PriorityKey, NegativeRemainingRejected) {
  EXPECT_THROW(obtain_priority(UrgencyLevel{0}, -1.0, 0.0, 0), std::invalid_argument);
}

TEST(PriorityKey, EvictionKeyReversesOrder) {
  const auto a = obtain_priority(UrgencyLevel{0}, 1.0, 0.0, 1);
  const auto b = obtain_priority(UrgencyLevel{3}, 2.0, 1.0, 2);
  ASSERT_LT(a, b);
  EXPECT_LT(eviction_priority(b), eviction_priority(a));
}

}  // namespace
}  // namespace semsched
