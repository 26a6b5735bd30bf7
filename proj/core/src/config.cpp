// Copyright 2026 The semsched Authors
// SPDX-License-Identifier: Apache-2.0

#include "semsched/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace semsched {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& what) { throw ConfigError(what); }

double parse_double(std::string_view key, std::string_view text) {
  try {
    std::size_t used = 0;
    const std::string s(text);
    const double v = std::stod(s, &used);
    if (used != s.size()) fail("");
    return v;
  } catch (...) {
    fail("config key '" + std::string(key) + "': '" + std::string(text) + "' is not a number");
  }
}

std::int64_t parse_int(std::string_view key, std::string_view text) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    fail("config key '" + std::string(key) + "': '" + std::string(text) + "' is not an integer");
  }
  return v;
}

bool parse_bool(std::string_view key, std::string_view text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  fail("config key '" + std::string(key) + "': '" + std::string(text) + "' is not a boolean");
}

GpuProfile profile_from_json(const json& j, std::string name) {
  if (!j.is_object()) fail("profile '" + name + "' must be an object");
  GpuProfile p;
  p.name = j.value("name", name);
  auto coef = [&](const char* key, double& out) {
    if (!j.contains(key)) fail("profile '" + p.name + "' is missing " + key);
    out = j.at(key).get<double>();
  };
  coef("alpha1", p.alpha1);
  coef("alpha2", p.alpha2);
  coef("gamma1", p.gamma1);
  coef("gamma2", p.gamma2);
  coef("beta_load", p.beta_load);
  p.beta_save = j.value("beta_save", p.beta_load);
  return p;
}

json profile_to_json(const GpuProfile& p) {
  return json{{"name", p.name},         {"alpha1", p.alpha1},
              {"alpha2", p.alpha2},     {"gamma1", p.gamma1},
              {"gamma2", p.gamma2},     {"beta_load", p.beta_load},
              {"beta_save", p.beta_save}};
}

TokenRange range_from_json(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2) fail(std::string(what) + " must be [lo, hi]");
  return TokenRange{j[0].get<Tokens>(), j[1].get<Tokens>()};
}

ErrorModel& error_model_for(ScenarioConfig& cfg, std::string_view key) {
  return key.find("urgency") != std::string_view::npos ? cfg.urgency_error : cfg.length_error;
}

DistanceMode parse_distance_mode(const std::string& s) {
  if (s == "perturbed") return DistanceMode::PerturbedOnly;
  if (s == "all") return DistanceMode::AllRequests;
  fail("predictor.distance_mode must be 'perturbed' or 'all'");
}

}  // namespace

void validate(const ScenarioConfig& cfg) {
  try {
    validate(cfg.profile);
    validate(cfg.workload);
    validate(cfg.predictor);
    validate(cfg.urgency_error);
    validate(cfg.length_error);
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  }
  if (cfg.batch_size < 1) fail("batch_size must be >= 1");
  if (cfg.capacity < 1) fail("capacity_tokens must be >= 1");
}

GpuProfile resolve_profile(const ScenarioConfig& cfg, std::string_view name) {
  for (const auto& p : cfg.custom_profiles) {
    if (p.name == name) return p;
  }
  try {
    return builtin_profile(name);
  } catch (const std::out_of_range& e) {
    fail(e.what());
  }
}

ScenarioConfig parse_scenario(std::string_view json_text, const std::filesystem::path& base_dir) {
  json j = json::parse(json_text.begin(), json_text.end(), nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) fail("scenario config is not a JSON object");

  ScenarioConfig cfg;
  try {
    if (j.contains("profiles")) {
      for (const auto& [name, body] : j["profiles"].items()) {
        cfg.custom_profiles.push_back(profile_from_json(body, name));
      }
    }
    if (j.contains("profile")) {
      const json& p = j["profile"];
      if (p.is_string()) {
        cfg.profile = resolve_profile(cfg, p.get<std::string>());
      } else {
        cfg.profile = profile_from_json(p, p.value("name", std::string("custom")));
      }
    }
    if (j.contains("policy")) set_config_value(cfg, "policy", j["policy"].get<std::string>());
    cfg.batch_size = j.value("batch_size", cfg.batch_size);
    if (j.contains("capacity_tokens") && !j["capacity_tokens"].is_null()) {
      cfg.capacity = j["capacity_tokens"].get<Tokens>();
    }
    cfg.seed = j.value("seed", cfg.seed);
    cfg.spike = j.value("spike", cfg.spike);
    cfg.record_events = j.value("record_events", cfg.record_events);

    if (j.contains("workload")) {
      const json& w = j["workload"];
      WorkloadSpec& s = cfg.workload;
      s.levels = w.value("levels", s.levels);
      s.urgency_weights = w.value("urgency_weights", s.urgency_weights);
      if (w.contains("prompt_len")) s.prompt_len = range_from_json(w["prompt_len"], "prompt_len");
      if (w.contains("output_len")) s.output_len = range_from_json(w["output_len"], "output_len");
      s.buckets = w.value("buckets", s.buckets);
      s.max_output_len = w.value("max_output_len", s.max_output_len);
      s.gap = w.value("gap_s", s.gap);
      s.max_concurrent = w.value("max_concurrent", s.max_concurrent);
      s.total_requests = w.value("total_requests", s.total_requests);
      if (w.contains("concurrency")) {
        const auto mode = w["concurrency"].get<std::string>();
        if (mode == "uniform") {
          s.concurrency = Concurrency::Uniform;
        } else if (mode == "fixed") {
          s.concurrency = Concurrency::Fixed;
        } else {
          fail("workload.concurrency must be 'uniform' or 'fixed'");
        }
      }
      if (w.contains("dataset") && !w["dataset"].is_null()) {
        std::filesystem::path p = w["dataset"].get<std::string>();
        if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
        cfg.dataset = p;
      }
    }

    if (j.contains("predictor")) {
      const json& p = j["predictor"];
      cfg.predictor.latency = p.value("latency_s", cfg.predictor.latency);
      cfg.predictor.batch_size = p.value("batch_size", cfg.predictor.batch_size);
      if (p.contains("strategy")) {
        set_config_value(cfg, "predictor.strategy", p["strategy"].get<std::string>());
      }
      cfg.urgency_error.error_rate = p.value("urgency_error", cfg.urgency_error.error_rate);
      cfg.length_error.error_rate = p.value("length_error", cfg.length_error.error_rate);
      if (p.contains("distance_mode")) {
        const auto mode = parse_distance_mode(p["distance_mode"].get<std::string>());
        cfg.urgency_error.mode = mode;
        cfg.length_error.mode = mode;
      }
    }

    if (j.contains("engine")) {
      const json& e = j["engine"];
      if (e.contains("decode_cost")) {
        const auto rule = e["decode_cost"].get<std::string>();
        if (rule == "max") {
          cfg.engine.decode_cost = DecodeCostRule::Max;
        } else if (rule == "sum") {
          cfg.engine.decode_cost = DecodeCostRule::Sum;
        } else {
          fail("engine.decode_cost must be 'max' or 'sum'");
        }
      }
      cfg.engine.charge_save = e.value("charge_save", cfg.engine.charge_save);
      cfg.engine.discard_dependent_decode =
          e.value("discard_dependent_decode", cfg.engine.discard_dependent_decode);
    }
  } catch (const json::exception& e) {
    fail(std::string("scenario config: ") + e.what());
  }
  if (cfg.spike) cfg.workload.concurrency = Concurrency::Fixed;
  cfg.workload.seed = cfg.seed;
  validate(cfg);
  return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path.parent_path());
}

std::string scenario_to_json(const ScenarioConfig& cfg, int indent) {
  const WorkloadSpec& w = cfg.workload;
  json j;
  j["policy"] = std::string(to_string(cfg.policy));
  j["profile"] = profile_to_json(cfg.profile);
  if (!cfg.custom_profiles.empty()) {
    json profiles = json::object();
    for (const auto& p : cfg.custom_profiles) profiles[p.name] = profile_to_json(p);
    j["profiles"] = profiles;
  }
  j["batch_size"] = cfg.batch_size;
  j["capacity_tokens"] = cfg.capacity;
  j["seed"] = cfg.seed;
  j["spike"] = cfg.spike;
  j["workload"] = {
      {"levels", w.levels},
      {"urgency_weights", w.urgency_weights},
      {"prompt_len", {w.prompt_len.lo, w.prompt_len.hi}},
      {"output_len", {w.output_len.lo, w.output_len.hi}},
      {"buckets", w.buckets},
      {"max_output_len", w.max_output_len},
      {"gap_s", w.gap},
      {"max_concurrent", w.max_concurrent},
      {"total_requests", w.total_requests},
      {"concurrency", w.concurrency == Concurrency::Fixed ? "fixed" : "uniform"},
  };
  if (cfg.dataset) j["workload"]["dataset"] = cfg.dataset->string();
  j["predictor"] = {
      {"latency_s", cfg.predictor.latency},
      {"batch_size", cfg.predictor.batch_size},
      {"strategy", std::string(to_string(cfg.predictor.strategy))},
      {"urgency_error", cfg.urgency_error.error_rate},
      {"length_error", cfg.length_error.error_rate},
      {"distance_mode",
       cfg.urgency_error.mode == DistanceMode::AllRequests ? "all" : "perturbed"},
  };
  j["engine"] = {
      {"decode_cost", cfg.engine.decode_cost == DecodeCostRule::Sum ? "sum" : "max"},
      {"charge_save", cfg.engine.charge_save},
      {"discard_dependent_decode", cfg.engine.discard_dependent_decode},
  };
  return j.dump(indent);
}

std::vector<std::string> sweep_axes() {
  return {"predictor.urgency_error", "urgency_error",  "predictor.length_error",
          "length_error",            "predictor.latency_s", "predictor.batch_size",
          "predictor.strategy",      "batch_size",      "capacity_tokens",
          "policy",                  "profile",         "seed",
          "workload.gap_s",          "workload.max_concurrent", "workload.total_requests",
          "spike"};
}

void set_config_value(ScenarioConfig& cfg, std::string_view key, std::string_view value) {
  if (key == "predictor.urgency_error" || key == "urgency_error" ||
      key == "predictor.length_error" || key == "length_error") {
    error_model_for(cfg, key).error_rate = parse_double(key, value);
  } else if (key == "predictor.latency_s") {
    cfg.predictor.latency = parse_double(key, value);
  } else if (key == "predictor.batch_size") {
    cfg.predictor.batch_size = static_cast<std::size_t>(parse_int(key, value));
  } else if (key == "predictor.strategy") {
    const auto s = parse_strategy(value);
    if (!s) fail("unknown predictor strategy '" + std::string(value) + "'");
    cfg.predictor.strategy = *s;
  } else if (key == "batch_size") {
    const auto b = parse_int(key, value);
    if (b < 1) fail("batch_size must be >= 1");
    cfg.batch_size = static_cast<std::size_t>(b);
  } else if (key == "capacity_tokens") {
    cfg.capacity = parse_int(key, value);
  } else if (key == "policy") {
    const auto p = parse_policy(value);
    if (!p) fail("unknown policy '" + std::string(value) + "'");
    cfg.policy = *p;
  } else if (key == "profile") {
    cfg.profile = resolve_profile(cfg, value);
  } else if (key == "seed") {
    cfg.seed = static_cast<std::uint64_t>(parse_int(key, value));
    cfg.workload.seed = cfg.seed;
  } else if (key == "workload.gap_s") {
    cfg.workload.gap = parse_double(key, value);
  } else if (key == "workload.max_concurrent") {
    cfg.workload.max_concurrent = static_cast<int>(parse_int(key, value));
  } else if (key == "workload.total_requests") {
    cfg.workload.total_requests = static_cast<std::size_t>(parse_int(key, value));
  } else if (key == "spike") {
    cfg.spike = parse_bool(key, value);
    if (cfg.spike) cfg.workload.concurrency = Concurrency::Fixed;
  } else {
    fail("unknown config key '" + std::string(key) + "'");
  }
}

}  // namespace semsched
