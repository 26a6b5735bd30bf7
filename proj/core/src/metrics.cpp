// Copyright 2026 The semsched Authors
// SPDX-License-Identifier: Apache-2.0

#include "semsched/metrics.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <stdexcept>
#include <thread>

namespace semsched {
namespace {

Seconds wait_of(const RequestRecord& r) { return *r.finish - r.arrival; }

Seconds norm_wait_of(const RequestRecord& r) {
  return wait_of(r) / static_cast<double>(std::max<Tokens>(1, r.generated));
}

int rank_of(const RequestRecord& r, Ranking ranking) {
  return ranking == Ranking::True ? r.true_urgency.rank : r.predicted_urgency.rank;
}

}  // namespace

Seconds average_waiting_time(std::span<const RequestRecord> records) {
  if (records.empty()) throw std::invalid_argument("average_waiting_time: no requests");
  std::string unfinished;
  Seconds total = 0.0;
  for (const RequestRecord& r : records) {
    if (!r.completed()) {
      unfinished += (unfinished.empty() ? "" : ",") + std::to_string(r.id);
      continue;
    }
    total += wait_of(r);
  }
  if (!unfinished.empty()) {
    throw std::invalid_argument("average_waiting_time: unfinished requests " + unfinished);
  }
  return total / static_cast<double>(records.size());
}

std::optional<Seconds> normalized_waiting_time(std::span<const RequestRecord> records,
                                               int level) {
  Seconds total = 0.0;
  std::size_t count = 0;
  for (const RequestRecord& r : records) {
    if (r.true_urgency.rank != level || !r.completed()) continue;
    total += norm_wait_of(r);
    ++count;
  }
  if (count == 0) return std::nullopt;
  return total / static_cast<double>(count);
}

std::optional<Seconds> normalized_waiting_time(std::span<const RequestRecord> records) {
  Seconds total = 0.0;
  std::size_t count = 0;
  for (const RequestRecord& r : records) {
    if (!r.completed()) continue;
    total += norm_wait_of(r);
    ++count;
  }
  if (count == 0) return std::nullopt;
  return total / static_cast<double>(count);
}

AuditResult constraint_audit(std::span<const RequestRecord> records, Ranking ranking,
                             std::size_t max_listed) {
  std::vector<const RequestRecord*> done;
  done.reserve(records.size());
  for (const RequestRecord& r : records) {
    if (r.completed()) done.push_back(&r);
  }
  std::sort(done.begin(), done.end(), [](const RequestRecord* a, const RequestRecord* b) {
    return *a->finish < *b->finish || (*a->finish == *b->finish && a->id < b->id);
  });

  AuditResult out;
  for (std::size_t x = 0; x < done.size(); ++x) {
    const RequestRecord& i = *done[x];
    for (std::size_t y = x + 1; y < done.size(); ++y) {
      const RequestRecord& j = *done[y];
      if (!(*i.finish < *j.finish)) continue;
      if (*i.finish < j.arrival) continue;
      ++out.comparable;
      if (rank_of(i, ranking) <= rank_of(j, ranking)) continue;
      ++out.violations;
      if (out.listed.size() < max_listed) out.listed.push_back({i.id, j.id});
    }
  }
  if (out.comparable > 0) {
    out.rate = static_cast<double>(out.violations) / static_cast<double>(out.comparable);
  }
  return out;
}

RunReport make_report(const ScenarioConfig& cfg, const Trace& trace) {
  RunReport rep;
  rep.policy = std::string(to_string(cfg.policy));
  rep.profile = cfg.profile.name;
  rep.seed = cfg.seed;
  rep.requests = trace.requests.size();
  rep.evictions = trace.evictions;
  rep.admission_failures = trace.admission_failures;
  rep.unservable = trace.unservable;
  rep.iterations = trace.iterations;
  rep.peak_used = trace.peak_used;
  rep.makespan = trace.makespan;
  rep.config_json = scenario_to_json(cfg);

  std::vector<RequestRecord> served;
  served.reserve(trace.requests.size());
  for (const RequestRecord& r : trace.requests) {
    if (!r.unservable) served.push_back(r);
  }
  rep.completed = served.size();
  if (served.empty()) return rep;

  rep.avg_wait = average_waiting_time(served);
  rep.norm_wait = normalized_waiting_time(served).value_or(0.0);

  std::map<int, LevelStats> by_level;
  for (const RequestRecord& r : served) {
    LevelStats& s = by_level[r.true_urgency.rank];
    s.level = r.true_urgency.rank;
    ++s.count;
    s.avg_wait += wait_of(r);
    s.norm_wait += norm_wait_of(r);
  }
  Seconds level_sum = 0.0;
  for (auto& [level, s] : by_level) {
    s.avg_wait /= static_cast<double>(s.count);
    s.norm_wait /= static_cast<double>(s.count);
    level_sum += s.norm_wait;
    rep.levels.push_back(s);
  }
  rep.norm_wait_level_avg = level_sum / static_cast<double>(rep.levels.size());

  const AuditResult audit = constraint_audit(served, Ranking::True, 0);
  rep.violations = audit.violations;
  rep.comparable_pairs = audit.comparable;
  rep.violation_rate = audit.rate;
  return rep;
}

std::vector<SweepResult> sweep(const ScenarioConfig& base, const std::string& axis,
                               const std::vector<std::string>& values, SeedMode seed_mode,
                               unsigned jobs) {
  if (values.empty()) throw ConfigError("sweep: empty value list");
  std::vector<SweepResult> results(values.size());
  for (std::size_t k = 0; k < values.size(); ++k) {
    ScenarioConfig cfg = base;
    set_config_value(cfg, axis, values[k]);
    if (seed_mode == SeedMode::Offset) cfg.seed += k;
    validate(cfg);
    results[k].config = std::move(cfg);
  }

  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(values.size());
  auto worker = [&] {
    for (std::size_t k = next++; k < results.size(); k = next++) {
      try {
        const Trace trace = run(results[k].config);
        results[k].report = make_report(results[k].config, trace);
        results[k].report.axis = axis;
        results[k].report.axis_value = values[k];
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const unsigned threads =
      std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(values.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

}  // namespace semsched
