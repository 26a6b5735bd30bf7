// Copyright 2026 The semsched Authors
// SPDX-License-Identifier: Apache-2.0

#include "semsched/predictor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "semsched/log.hpp"

namespace semsched {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::int64_t displacement(const ErrorModel& em, std::int64_t range) {
  if (em.mode == DistanceMode::AllRequests) return std::max<std::int64_t>(1, range);
  return std::max<std::int64_t>(1, std::llround(em.error_rate * static_cast<double>(range)));
}

// Moves `truth` by d in the drawn direction, clamped to [lo, hi]. If clamping
// cancels the move entirely, the opposite direction is used.
std::int64_t displace(std::int64_t truth, std::int64_t d, bool positive, std::int64_t lo,
                      std::int64_t hi) {
  const std::int64_t first = std::clamp(truth + (positive ? d : -d), lo, hi);
  if (first != truth) return first;
  return std::clamp(truth + (positive ? -d : d), lo, hi);
}

}  // namespace

void validate(const ErrorModel& em) {
  if (!(em.error_rate >= 0.0 && em.error_rate <= 1.0)) {
    throw std::invalid_argument("error rate must lie in [0, 1]");
  }
}

PerturbationDraw draw_perturbation(std::mt19937_64& rng) {
  PerturbationDraw d;
  d.u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  d.positive = (rng() & 1U) != 0;
  return d;
}

std::mt19937_64 request_rng(std::uint64_t seed, RequestId id, std::uint64_t stream) {
  const std::uint64_t s =
      splitmix64(splitmix64(seed) ^ splitmix64(static_cast<std::uint64_t>(id) + 0x51ed27ULL) ^
                 splitmix64(stream * 0x2545f4914f6cdd1dULL));
  return std::mt19937_64(s);
}

UrgencyLevel predict_urgency(UrgencyLevel truth, const ErrorModel& em, int levels,
                             const PerturbationDraw& draw) {
  if (levels < 2 || !(draw.u < em.error_rate)) return truth;
  const auto d = displacement(em, levels);
  return UrgencyLevel{static_cast<int>(displace(truth.rank, d, draw.positive, 0, levels - 1))};
}

UrgencyLevel predict_urgency(UrgencyLevel truth, const ErrorModel& em, int levels,
                             std::mt19937_64& rng) {
  return predict_urgency(truth, em, levels, draw_perturbation(rng));
}

LengthBucket bucketize(Tokens len, int buckets, Tokens max_len) {
  if (buckets < 1 || max_len < 1) throw std::invalid_argument("bucketize: invalid partition");
  if (len < 0) throw std::invalid_argument("bucketize: negative length");
  if (len > max_len) {
    warn("length " + std::to_string(len) + " exceeds max " + std::to_string(max_len) +
         "; using the top bucket");
    len = max_len;
  }
  const int index = static_cast<int>(std::min<Tokens>(buckets - 1, len * buckets / max_len));
  // Midpoint of [index * max/B, (index + 1) * max/B).
  const Tokens mid = static_cast<Tokens>(
      std::llround(static_cast<double>((2 * index + 1) * max_len) / (2.0 * buckets)));
  return LengthBucket{index, mid};
}

Tokens perturb_length(Tokens truth, const ErrorModel& em, Tokens max_len,
                      const PerturbationDraw& draw) {
  if (!(draw.u < em.error_rate)) return truth;
  return displace(truth, displacement(em, max_len), draw.positive, 0, max_len);
}

LengthBucket predict_length_bucket(Tokens truth, const ErrorModel& em, int buckets,
                                   Tokens max_len, const PerturbationDraw& draw) {
  return bucketize(perturb_length(std::min(truth, max_len), em, max_len, draw), buckets, max_len);
}

LengthBucket predict_length_bucket(Tokens truth, const ErrorModel& em, int buckets,
                                   Tokens max_len, std::mt19937_64& rng) {
  return predict_length_bucket(truth, em, buckets, max_len, draw_perturbation(rng));
}

std::string_view to_string(PredictorStrategy s) {
  return s == PredictorStrategy::ImmediateProcessing ? "immediate" : "full_batching";
}

std::optional<PredictorStrategy> parse_strategy(std::string_view name) {
  if (name == "immediate" || name == "immediate_processing") {
    return PredictorStrategy::ImmediateProcessing;
  }
  if (name == "full_batching" || name == "full") return PredictorStrategy::FullBatching;
  return std::nullopt;
}

void validate(const PredictorConfig& cfg) {
  if (!(cfg.latency >= 0.0) || !std::isfinite(cfg.latency)) {
    throw std::invalid_argument("predictor latency must be finite and >= 0");
  }
  if (cfg.batch_size < 1) throw std::invalid_argument("predictor batch size must be >= 1");
}

std::vector<PredictionReady> predictor_pipeline(std::span<const Request> arrivals,
                                                const PredictorConfig& cfg) {
  validate(cfg);
  std::vector<PredictionReady> out;
  out.reserve(arrivals.size());
  Seconds predictor_free = 0.0;
  std::uint32_t invocation = 0;

  auto fire = [&](std::size_t first, std::size_t last, Seconds at) {
    const Seconds start = std::max(at, predictor_free);
    const Seconds ready = start + cfg.latency;
    predictor_free = ready;
    for (std::size_t i = first; i < last; ++i) {
      out.push_back({arrivals[i].id, ready, invocation});
    }
    ++invocation;
  };

  if (cfg.strategy == PredictorStrategy::ImmediateProcessing) {
    std::size_t i = 0;
    while (i < arrivals.size()) {
      std::size_t group_end = i;
      while (group_end < arrivals.size() &&
             arrivals[group_end].arrival_time == arrivals[i].arrival_time) {
        ++group_end;
      }
      for (std::size_t chunk = i; chunk < group_end; chunk += cfg.batch_size) {
        fire(chunk, std::min(group_end, chunk + cfg.batch_size), arrivals[i].arrival_time);
      }
      i = group_end;
    }
  } else {
    std::size_t pending_from = 0;
    for (std::size_t i = 0; i < arrivals.size(); ++i) {
      if (i + 1 - pending_from == cfg.batch_size) {
        fire(pending_from, i + 1, arrivals[i].arrival_time);
        pending_from = i + 1;
      }
    }
    if (pending_from < arrivals.size()) {
      fire(pending_from, arrivals.size(), arrivals.back().arrival_time);
    }
  }
  return out;
}

}  // namespace semsched
