// Copyright 2026 The semsched Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "semsched/cost_model.hpp"
#include "semsched/predictor.hpp"
#include "semsched/scheduler.hpp"
#include "semsched/workload.hpp"

namespace semsched {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class DecodeCostRule {
  Max,  // members of a decode round step in parallel
  Sum,  // serial device
};

struct EngineOptions {
  DecodeCostRule decode_cost = DecodeCostRule::Max;
  // Charge beta_save for offloaded tokens on the device timeline.
  bool charge_save = false;
  bool discard_dependent_decode = true;
};

inline constexpr Tokens kAmpleCapacity = std::numeric_limits<Tokens>::max() / 4;

struct ScenarioConfig {
  Policy policy = Policy::Semantic;
  GpuProfile profile = builtin_profile("a100_qwen7b");
  std::vector<GpuProfile> custom_profiles;  // consulted before the built-ins
  std::size_t batch_size = 8;
  Tokens capacity = kAmpleCapacity;         // device KV token slots
  WorkloadSpec workload;                    // workload.seed follows `seed`
  bool spike = false;                       // every tick carries max_concurrent
  std::optional<std::filesystem::path> dataset;
  PredictorConfig predictor;
  ErrorModel urgency_error;
  ErrorModel length_error;
  EngineOptions engine;
  std::uint64_t seed = 1;
  bool record_events = false;
};

// Throws ConfigError on the first invalid field.
void validate(const ScenarioConfig& cfg);

// Custom profiles first, then built-ins. Throws ConfigError if unknown.
GpuProfile resolve_profile(const ScenarioConfig& cfg, std::string_view name);

// Keys not present keep their defaults. Relative dataset paths resolve
// against base_dir. Throws ConfigError.
ScenarioConfig parse_scenario(std::string_view json_text,
                              const std::filesystem::path& base_dir = {});
ScenarioConfig load_scenario(const std::filesystem::path& path);

// Canonical JSON echo of a config, readable by parse_scenario.
std::string scenario_to_json(const ScenarioConfig& cfg, int indent = -1);

// Sweepable keys, e.g. "predictor.urgency_error" (alias "urgency_error"),
// "predictor.latency_s", "predictor.batch_size", "predictor.strategy",
// "batch_size", "capacity_tokens", "policy", "profile", "seed",
// "workload.gap_s", "workload.max_concurrent", "workload.total_requests".
std::vector<std::string> sweep_axes();

// Throws ConfigError for an unknown key or unparsable value.
void set_config_value(ScenarioConfig& cfg, std::string_view key, std::string_view value);

}  // namespace semsched
