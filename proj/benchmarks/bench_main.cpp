// Copyright 2026 The semsched Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "semsched/config.hpp"
#include "semsched/cost_model.hpp"
#include "semsched/engine.hpp"
#include "semsched/log.hpp"
#include "semsched/queues.hpp"
#include "semsched/scheduler.hpp"

namespace {

using namespace semsched;

std::vector<PriorityKey> random_keys(std::size_t n) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> urgency(0, 4);
  std::uniform_real_distribution<double> remaining(0.0, 10.0);
  std::vector<PriorityKey> keys(n);
  for (std::size_t i = 0; i < n; ++i) {
    keys[i] = {urgency(rng), remaining(rng), static_cast<double>(i), static_cast<RequestId>(i)};
  }
  return keys;
}

void BM_HeapPushPop(benchmark::State& state) {
  const auto keys = random_keys(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    DispatchQueue heap;
    for (const PriorityKey& k : keys) heap.push(k.id, k);
    while (auto e = heap.pop()) benchmark::DoNotOptimize(e);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_HeapPushPop)->Range(64, 1 << 14);

void BM_OptimalSaveTokens(benchmark::State& state) {
  const GpuProfile& p = builtin_profile("a100_qwen7b");
  Tokens m = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(optimal_save_tokens(256, m, p));
    m = m % 512 + 1;
  }
}
BENCHMARK(BM_OptimalSaveTokens);

void BM_ScheduleRound(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const GpuProfile& p = builtin_profile("a100_qwen7b");
  std::vector<Request> pool(n);
  const auto keys = random_keys(n);
  for (std::size_t i = 0; i < n; ++i) {
    pool[i].id = static_cast<RequestId>(i);
    pool[i].prompt_len = 64;
    pool[i].true_output_len = 128;
    pool[i].predicted_urgency = UrgencyLevel{keys[i].urgency};
    pool[i].predicted_bucket = bucketize(128);
    pool[i].remaining_time = estimate_remaining_time(pool[i], p);
  }
  for (auto _ : state) {
    state.PauseTiming();
    DispatchQueue heap;
    ArrivalBuffer buffer;
    for (std::size_t i = 0; i < n; ++i) buffer.append(static_cast<RequestId>(i));
    state.ResumeTiming();
    benchmark::DoNotOptimize(schedule_round(Policy::Semantic, heap, buffer, {}, 14, pool));
  }
}
BENCHMARK(BM_ScheduleRound)->Range(64, 1 << 12);

void BM_SpikeRun(benchmark::State& state) {
  set_warning_sink([](std::string_view) {});
  ScenarioConfig cfg;
  cfg.batch_size = 14;
  cfg.spike = true;
  cfg.workload.gap = 0.1;
  cfg.workload.max_concurrent = 100;
  cfg.workload.total_requests = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run(cfg).iterations);
}
BENCHMARK(BM_SpikeRun)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
