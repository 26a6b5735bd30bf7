// Copyright 2026 The semsched Authors
// SPDX-License-Identifier: Apache-2.0

#include "semsched/workload.hpp"

#include <gtest/gtest.h>

#include <array>
#include <map>
#include <sstream>
#include <stdexcept>

namespace semsched {
namespace {

TEST(Generate, OnePerTickIsArithmetic) {
  WorkloadSpec s;
  s.max_concurrent = 1;
  s.total_requests = 3;
  const auto reqs = generate(s);
  ASSERT_EQ(reqs.size(), 3u);
  EXPECT_EQ(reqs[0].arrival_time, 0.0);
  EXPECT_EQ(reqs[1].arrival_time, 1.0);
  EXPECT_EQ(reqs[2].arrival_time, 2.0);
}

TEST(Generate, SpikeTicksCarryFixedCount) {
  WorkloadSpec s;
  s.gap = 0.1;
  s.max_concurrent = 100;
  s.concurrency = Concurrency::Fixed;
  s.total_requests = 1000;
  const auto reqs = generate(s);
  std::map<Seconds, int> per_tick;
  for (const Request& r : reqs) ++per_tick[r.arrival_time];
  EXPECT_EQ(per_tick.size(), 10u);
  for (const auto& [t, n] : per_tick) EXPECT_EQ(n, 100);
}

TEST(Generate, DeterministicPerSeed) {
  WorkloadSpec s;
  s.total_requests = 200;
  const auto a = generate(s);
  const auto b = generate(s);
  s.seed = 2;
  const auto c = generate(s);
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].arrival_time, b[i].arrival_time);
    EXPECT_EQ(a[i].prompt_len, b[i].prompt_len);
    EXPECT_EQ(a[i].true_output_len, b[i].true_output_len);
    EXPECT_EQ(a[i].true_urgency, b[i].true_urgency);
    differs |= a[i].true_output_len != c[i].true_output_len;
  }
  EXPECT_TRUE(differs);
}

TEST(Generate, FieldsWithinBoundsAndOrdered) {
  WorkloadSpec s;
  s.total_requests = 2000;
  const auto reqs = generate(s);
  for (std::size_t i = 0; i < reqs.size(); ++i) {
    const Request& r = reqs[i];
    EXPECT_EQ(r.id, static_cast<RequestId>(i));
    EXPECT_GE(r.prompt_len, 16);
    EXPECT_LE(r.prompt_len, 128);
    EXPECT_GE(r.true_output_len, 1);
    EXPECT_LE(r.true_output_len, 500);
    if (i > 0) EXPECT_GE(r.arrival_time, reqs[i - 1].arrival_time);
  }
}

TEST(Generate, UrgencyHistogramChiSquare) {
  WorkloadSpec s;
  s.total_requests = 10000;
  std::array<int, 5> counts{};
  for (const Request& r : generate(s)) ++counts[static_cast<std::size_t>(r.true_urgency.rank)];
  double chi2 = 0.0;
  for (int c : counts) chi2 += (c - 2000.0) * (c - 2000.0) / 2000.0;
  EXPECT_LT(chi2, 18.47);  // df = 4, p = 0.001
}

TEST(Generate, WeightedUrgency) {
  WorkloadSpec s;
  s.total_requests = 10000;
  s.urgency_weights = {1, 0, 0, 0, 3};
  std::array<int, 5> counts{};
  for (const Request& r : generate(s)) ++counts[static_cast<std::size_t>(r.true_urgency.rank)];
  EXPECT_EQ(counts[1] + counts[2] + counts[3], 0);
  EXPECT_NEAR(counts[4] / 10000.0, 0.75, 0.02);
}

TEST(WorkloadSpec, InvalidRejected) {
  WorkloadSpec s;
  s.gap = 0.0;
  EXPECT_THROW(validate(s), std::invalid_argument);
  s = {};
  s.output_len = {1, 900};
  EXPECT_THROW(validate(s), std::invalid_argument);
  s = {};
  s.urgency_weights = {1, 2};
  EXPECT_THROW(validate(s), std::invalid_argument);
}

TEST(Dataset, ValidLineMapsDirectly) {
  std::istringstream in(R"({"id":1,"prompt_tokens":40,"urgency":0,"output_tokens":30})");
  const DatasetLoad load = parse_dataset(in);
  ASSERT_EQ(load.records.size(), 1u);
  EXPECT_TRUE(load.errors.empty());
  EXPECT_EQ(load.records[0].id, 1);
  EXPECT_EQ(prompt_token_count(load.records[0]), 40);
  EXPECT_EQ(load.records[0].urgency, 0);
  EXPECT_EQ(load.records[0].output_tokens, 30);
}

TEST(Dataset, OutOfRangeUrgencyRejected) {
  std::istringstream in(R"({"id":1,"prompt_tokens":40,"urgency":7,"output_tokens":30})");
  const DatasetLoad load = parse_dataset(in, 5);
  EXPECT_TRUE(load.records.empty());
  ASSERT_EQ(load.errors.size(), 1u);
  EXPECT_EQ(load.errors[0].line, 1u);
  EXPECT_NE(load.errors[0].reason.find("urgency"), std::string::npos);
}

TEST(Dataset, MissingPromptRejected) {
  std::istringstream in(R"({"id":1,"urgency":2,"output_tokens":30})");
  const DatasetLoad load = parse_dataset(in);
  EXPECT_TRUE(load.records.empty());
  EXPECT_EQ(load.errors.size(), 1u);
}

TEST(Dataset, FixtureThreeValidOneMalformed) {
  const DatasetLoad load = load_dataset(SEMSCHED_FIXTURE_DIR "/dataset.jsonl");
  EXPECT_EQ(load.records.size(), 3u);
  ASSERT_EQ(load.errors.size(), 1u);
  EXPECT_EQ(load.errors[0].line, 3u);
  // Whitespace token count of the prompt text is the fallback.
  EXPECT_EQ(prompt_token_count(load.records[1]), 6);
}

TEST(Dataset, MissingFileThrows) {
  EXPECT_THROW(load_dataset("/nonexistent/dataset.jsonl"), std::runtime_error);
}

TEST(Dataset, SerializeRoundTrip) {
  std::vector<DatasetRecord> records(3);
  records[0] = {1, std::nullopt, 40, 0, 30};
  records[1] = {2, std::string("fever and \"cough\""), std::nullopt, 2, 12};
  records[2] = {3, std::string("x y"), 9, 4, 500};
  std::istringstream in(serialize_dataset(records));
  const DatasetLoad load = parse_dataset(in);
  EXPECT_TRUE(load.errors.empty());
  EXPECT_EQ(load.records, records);
}

TEST(Dataset, RequestsTakeTimingFromScenario) {
  std::vector<DatasetRecord> records{{1, std::nullopt, 40, 0, 30}, {2, std::nullopt, 8, 3, 5}};
  WorkloadSpec s;
  s.max_concurrent = 1;
  s.gap = 0.1;
  const auto reqs = requests_from_dataset(records, s);
  ASSERT_EQ(reqs.size(), 2u);
  EXPECT_EQ(reqs[1].arrival_time, 0.1);
  EXPECT_EQ(reqs[1].prompt_len, 8);
  EXPECT_EQ(reqs[1].true_urgency.rank, 3);
}

}  // namespace
}  // namespace semsched
