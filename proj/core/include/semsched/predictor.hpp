// Copyright 2026 The semsched Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "semsched/request.hpp"

namespace semsched {

// How the error rate maps to a displacement distance.
//   PerturbedOnly: perturbed requests move by max(1, round(e * range)), so the
//                  mean normalised distance over perturbed requests is ~e.
//   AllRequests:   perturbed requests move by the full range, so the mean
//                  over all requests is ~e.
enum class DistanceMode { PerturbedOnly, AllRequests };

struct ErrorModel {
  double error_rate = 0.0;  // probability that a prediction is perturbed
  DistanceMode mode = DistanceMode::PerturbedOnly;
};

// Throws std::invalid_argument if error_rate is outside [0, 1].
void validate(const ErrorModel& em);

// One request's random draws. Fixing the draw per request keeps perturbed sets
// nested as the error rate grows.
struct PerturbationDraw {
  double u = 1.0;         // perturbed iff u < error_rate
  bool positive = true;   // displacement direction before clamping
};

PerturbationDraw draw_perturbation(std::mt19937_64& rng);

// Deterministic per-(seed, request, stream) generator.
std::mt19937_64 request_rng(std::uint64_t seed, RequestId id, std::uint64_t stream);

UrgencyLevel predict_urgency(UrgencyLevel truth, const ErrorModel& em, int levels,
                             const PerturbationDraw& draw);
UrgencyLevel predict_urgency(UrgencyLevel truth, const ErrorModel& em, int levels,
                             std::mt19937_64& rng);

// index = min(B-1, floor(len * B / max_len)); representative = bucket
// midpoint. len > max_len lands in the top bucket with a warning.
LengthBucket bucketize(Tokens len, int buckets = kDefaultLengthBuckets,
                       Tokens max_len = kDefaultMaxOutputLen);

// The perturbed (pre-bucketing) length.
Tokens perturb_length(Tokens truth, const ErrorModel& em, Tokens max_len,
                      const PerturbationDraw& draw);

LengthBucket predict_length_bucket(Tokens truth, const ErrorModel& em, int buckets,
                                   Tokens max_len, const PerturbationDraw& draw);
LengthBucket predict_length_bucket(Tokens truth, const ErrorModel& em, int buckets,
                                   Tokens max_len, std::mt19937_64& rng);

enum class PredictorStrategy { ImmediateProcessing, FullBatching };

std::string_view to_string(PredictorStrategy s);
std::optional<PredictorStrategy> parse_strategy(std::string_view name);

struct PredictorConfig {
  Seconds latency = 0.0;        // per invocation
  std::size_t batch_size = 64;  // requests per invocation
  PredictorStrategy strategy = PredictorStrategy::ImmediateProcessing;
};

void validate(const PredictorConfig& cfg);

struct PredictionReady {
  RequestId id;
  Seconds ready_time;
  std::uint32_t invocation;  // sequential invocation number
};

// Timing of the predictor resource, a single server separate from the device.
//   ImmediateProcessing: each group of simultaneous arrivals is predicted as
//     soon as the predictor is free, in ceil(k / batch_size) invocations.
//   FullBatching: requests accumulate until batch_size are pending; the full
//     batch is predicted in one invocation. A residual partial batch is
//     flushed at the last arrival.
// `arrivals` must be sorted by arrival_time; results follow the same order.
std::vector<PredictionReady> predictor_pipeline(std::span<const Request> arrivals,
                                                const PredictorConfig& cfg);

}  // namespace semsched
