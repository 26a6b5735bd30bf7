// Copyright 2026 The semsched Authors
// SPDX-License-Identifier: Apache-2.0

#include "semsched/engine.hpp"

#include <algorithm>
#include <queue>
#include <string>
#include <unordered_set>

#include "semsched/log.hpp"
#include "semsched/predictor.hpp"
#include "semsched/queues.hpp"
#include "semsched/workload.hpp"

namespace semsched {
namespace {

constexpr std::uint64_t kUrgencyStream = 0x75726765ULL;  // "urge"
constexpr std::uint64_t kLengthStream = 0x6c656e67ULL;   // "leng"

enum class Pending { Arrival, Ready, IterationEnd };

struct PendingEvent {
  Seconds time;
  std::uint64_t seq;
  Pending type;
  RequestId id;
};

// Earliest time first, FIFO among equal times.
struct Later {
  bool operator()(const PendingEvent& a, const PendingEvent& b) const {
    return a.time > b.time || (a.time == b.time && a.seq > b.seq);
  }
};

TraceEvent make_event(Seconds time, EventKind kind, RequestId id = -1) {
  TraceEvent ev;
  ev.time = time;
  ev.kind = kind;
  ev.id = id;
  return ev;
}

class Simulation {
 public:
  Simulation(const ScenarioConfig& cfg, std::vector<Request> requests)
      : cfg_(cfg),
        key_(key_function(cfg.policy)),
        pool_(std::move(requests)),
        mem_{cfg.capacity, 0} {
    eviction_opts_.discard_dependent_decode = cfg.engine.discard_dependent_decode;
    trace_.capacity = cfg.capacity;
    trace_.requests.reserve(pool_.size());
    for (const Request& r : pool_) {
      RequestRecord rec;
      rec.id = r.id;
      rec.arrival = r.arrival_time;
      rec.prompt_len = r.prompt_len;
      rec.output_len = r.true_output_len;
      rec.true_urgency = r.true_urgency;
      rec.predicted_urgency = r.predicted_urgency;
      rec.predicted_bucket = r.predicted_bucket;
      trace_.requests.push_back(rec);
    }
  }

  Trace run() {
    const std::vector<PredictionReady> ready = predictor_pipeline(pool_, cfg_.predictor);
    for (const PredictionReady& pr : ready) {
      const Request& r = pool_[static_cast<std::size_t>(pr.id)];
      if (cfg_.record_events) push(r.arrival_time, Pending::Arrival, r.id);
      push(pr.ready_time, Pending::Ready, r.id);
    }

    while (!events_.empty()) {
      const Seconds now = events_.top().time;
      while (!events_.empty() && events_.top().time == now) {
        const PendingEvent e = events_.top();
        events_.pop();
        switch (e.type) {
          case Pending::Arrival: {
            TraceEvent ev = make_event(now, EventKind::Arrival, e.id);
            log(std::move(ev));
            break;
          }
          case Pending::Ready: on_ready(e.id, now); break;
          case Pending::IterationEnd: finish_round(now); break;
        }
      }
      if (!busy_) start_round(now);
    }

    if (cfg_.record_events) {
      TraceEvent ev = make_event(trace_.makespan, EventKind::RunEnd);
      ev.used = mem_.used;
      ev.capacity = mem_.capacity;
      log(std::move(ev));
    }
    return std::move(trace_);
  }

 private:
  void push(Seconds t, Pending type, RequestId id) { events_.push({t, seq_++, type, id}); }

  void log(TraceEvent ev) {
    if (cfg_.record_events) trace_.events.push_back(std::move(ev));
  }

  RequestRecord& record(RequestId id) { return trace_.requests[static_cast<std::size_t>(id)]; }
  Request& req(RequestId id) { return pool_[static_cast<std::size_t>(id)]; }

  void on_ready(RequestId id, Seconds now) {
    record(id).ready = now;
    buffer_append(buffer_, req(id));
    log(make_event(now, EventKind::PredictionReady, id));
  }

  bool has_work() const { return !buffer_.empty() || !waiting_.empty() || !ongoing_.empty(); }

  void mark_unservable(Request& r, Seconds now) {
    resident_.erase(r.id);
    mem_.used -= r.kv_device_tokens;
    r.kv_device_tokens = 0;
    record(r.id).unservable = true;
    ++trace_.unservable;
    warn("request " + std::to_string(r.id) + " cannot fit in " + std::to_string(mem_.capacity) +
         " KV slots; dropped as unservable");
    TraceEvent ev = make_event(now, EventKind::Unservable, r.id);
    ev.used = mem_.used;
    ev.capacity = mem_.capacity;
    log(std::move(ev));
  }

  // Makes room for one batch member. `pinned` counts the device slots of
  // members already admitted this round; they cannot be evicted.
  bool admit(Request& r, Seconds now, Tokens& pinned, std::unordered_set<RequestId>& evicted,
             Tokens& offloaded) {
    const Tokens growth =
        r.needs_prefill() ? r.prompt_len + r.decoded_tokens - r.kv_device_tokens : 1;
    if (r.kv_device_tokens + growth > mem_.capacity) {
      mark_unservable(r, now);
      return false;
    }
    resident_.erase(r.id);

    // Reserve the predicted remainder when it can ever fit, never less than
    // what this round writes.
    const Tokens room = mem_.capacity - pinned - r.kv_device_tokens;
    const Tokens demand = std::max(growth, std::min(estimate_kv_size(r), room));

    auto observer = [&](const EvictionDecision& d, const Request& victim, Seconds before) {
      evicted.insert(victim.id);
      ++trace_.evictions;
      ++record(victim.id).evictions;
      offloaded += (d.prefill == PrefillAction::Offload ? d.prefill_tokens : 0) + d.decode_saved;
      TraceEvent ev = make_event(now, EventKind::Eviction, victim.id);
      ev.decision = d;
      ev.used = mem_.used;
      ev.capacity = mem_.capacity;
      ev.remaining_before = before;
      ev.remaining_after = victim.remaining_time;
      log(std::move(ev));
    };
    const EvictionOutcome outcome =
        priority_based_eviction(r, demand, resident_, waiting_, mem_, pool_, cfg_.profile, key_,
                                eviction_opts_, observer);
    if (!outcome.admitted || growth > mem_.capacity - mem_.used) {
      if (r.kv_device_tokens > 0) resident_.insert(r.id, key_(r));
      waiting_.push(r.id, key_(r));
      ++trace_.admission_failures;
      TraceEvent ev = make_event(now, EventKind::AdmissionFailure, r.id);
      ev.used = mem_.used;
      ev.capacity = mem_.capacity;
      log(std::move(ev));
      return false;
    }
    r.kv_device_tokens += growth;
    mem_.used += growth;
    pinned += r.kv_device_tokens;
    trace_.peak_used = std::max(trace_.peak_used, mem_.used);
    return true;
  }

  void start_round(Seconds now) {
    while (has_work()) {
      const Batch selected =
          schedule_round(cfg_.policy, waiting_, buffer_, ongoing_, cfg_.batch_size, pool_);
      ongoing_.clear();

      Batch batch;
      batch.kind = BatchKind::Decode;
      Tokens pinned = 0;
      Tokens offloaded = 0;
      std::unordered_set<RequestId> evicted;
      for (RequestId id : selected.members) {
        // A later member may have been evicted to make room for an earlier
        // one; it is back in the waiting heap.
        if (evicted.contains(id)) continue;
        Request& r = req(id);
        if (!admit(r, now, pinned, evicted, offloaded)) continue;
        batch.members.push_back(id);
        if (r.needs_prefill()) batch.kind = BatchKind::Prefill;
      }
      if (batch.empty()) continue;

      Seconds duration =
          batch_duration(batch, pool_, cfg_.profile, cfg_.engine.decode_cost);
      if (cfg_.engine.charge_save) {
        duration += cfg_.profile.beta_save * static_cast<double>(offloaded);
      }

      for (RequestId id : batch.members) {
        Request& r = req(id);
        RequestRecord& rec = record(id);
        if (!rec.first_scheduled) rec.first_scheduled = now;
        r.started = true;
        if (r.needs_prefill()) {
          r.transition(Stage::Prefilling);
          r.prefilled_tokens = r.prompt_len;
          r.kv_host_tokens = 0;
          r.recompute_tokens = 0;
        }
      }

      ++trace_.iterations;
      if (cfg_.record_events) {
        TraceEvent ev = make_event(now, EventKind::Iteration);
        ev.end = now + duration;
        ev.batch_kind = batch.kind;
        ev.members = batch.members;
        ev.used = mem_.used;
        ev.capacity = mem_.capacity;
        log(std::move(ev));
      }
      running_ = std::move(batch.members);
      busy_ = true;
      push(now + duration, Pending::IterationEnd, -1);
      return;
    }
  }

  void finish_round(Seconds now) {
    busy_ = false;
    trace_.makespan = std::max(trace_.makespan, now);
    for (RequestId id : running_) {
      Request& r = req(id);
      RequestRecord& rec = record(id);
      if (r.stage == Stage::Prefilling) {
        r.transition(Stage::Decoding);
      } else {
        ++r.decoded_tokens;
        ++rec.generated;
        if (r.decoded_tokens >= r.true_output_len) {
          r.transition(Stage::Completed);
          r.finish_time = now;
          rec.finish = now;
          mem_.used -= r.kv_device_tokens;
          r.kv_device_tokens = 0;
          r.remaining_time = 0.0;
          TraceEvent ev = make_event(now, EventKind::Completion, id);
          ev.used = mem_.used;
          ev.capacity = mem_.capacity;
          log(std::move(ev));
          continue;
        }
      }
      r.remaining_time = estimate_remaining_time(r, cfg_.profile);
      resident_.insert(id, key_(r));
      ongoing_.push_back(id);
    }
    running_.clear();
  }

  const ScenarioConfig& cfg_;
  KeyFunction key_;
  EvictionOptions eviction_opts_;
  std::vector<Request> pool_;
  Trace trace_;
  DispatchQueue waiting_;
  EvictionQueue resident_;
  ArrivalBuffer buffer_;
  DeviceMemory mem_;
  std::vector<RequestId> ongoing_;
  std::vector<RequestId> running_;
  std::priority_queue<PendingEvent, std::vector<PendingEvent>, Later> events_;
  std::uint64_t seq_ = 0;
  bool busy_ = false;
};

}  // namespace

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::Arrival: return "arrival";
    case EventKind::PredictionReady: return "ready";
    case EventKind::Iteration: return "iteration";
    case EventKind::Eviction: return "eviction";
    case EventKind::AdmissionFailure: return "admission_failure";
    case EventKind::Completion: return "completion";
    case EventKind::Unservable: return "unservable";
    case EventKind::RunEnd: return "run_end";
  }
  return "unknown";
}

Seconds batch_duration(const Batch& batch, std::span<const Request> pool, const GpuProfile& p,
                       DecodeCostRule rule) {
  Seconds restore = 0.0;
  Seconds step = 0.0;
  for (RequestId id : batch.members) {
    const Request& r = pool[static_cast<std::size_t>(id)];
    if (r.needs_prefill()) {
      restore += restore_time(r, p);
      continue;
    }
    const Seconds s = decode_step_time(r.prompt_len, r.decoded_tokens + 1, p);
    step = rule == DecodeCostRule::Max ? std::max(step, s) : step + s;
  }
  return restore + step;
}

void apply_predictions(std::vector<Request>& requests, const ScenarioConfig& cfg) {
  const WorkloadSpec& w = cfg.workload;
  for (Request& r : requests) {
    auto urgency_rng = request_rng(cfg.seed, r.id, kUrgencyStream);
    auto length_rng = request_rng(cfg.seed, r.id, kLengthStream);
    r.predicted_urgency = predict_urgency(r.true_urgency, cfg.urgency_error, w.levels, urgency_rng);
    r.predicted_bucket = predict_length_bucket(r.true_output_len, cfg.length_error, w.buckets,
                                               w.max_output_len, length_rng);
    r.remaining_time = estimate_remaining_time(r, cfg.profile);
  }
}

std::vector<Request> scenario_requests(const ScenarioConfig& cfg) {
  WorkloadSpec spec = cfg.workload;
  spec.seed = cfg.seed;
  if (cfg.spike) spec.concurrency = Concurrency::Fixed;
  if (!cfg.dataset) return generate(spec);

  DatasetLoad load;
  try {
    load = load_dataset(*cfg.dataset, spec.levels);
  } catch (const std::runtime_error& e) {
    throw ConfigError(e.what());
  }
  for (const DatasetError& err : load.errors) {
    warn(cfg.dataset->string() + ":" + std::to_string(err.line) + ": " + err.reason);
  }
  return requests_from_dataset(load.records, spec);
}

Trace run(const ScenarioConfig& cfg) {
  validate(cfg);
  return run(cfg, scenario_requests(cfg));
}

Trace run(const ScenarioConfig& cfg, std::vector<Request> requests) {
  validate(cfg);
  for (std::size_t i = 0; i < requests.size(); ++i) {
    const Request& r = requests[i];
    if (r.id != static_cast<RequestId>(i)) throw ConfigError("request ids must be 0..N-1");
    if (i > 0 && r.arrival_time < requests[i - 1].arrival_time) {
      throw ConfigError("requests must be sorted by arrival time");
    }
    if (r.prompt_len < 1 || r.true_output_len < 1) {
      throw ConfigError("request " + std::to_string(r.id) + " needs prompt and output >= 1");
    }
    if (r.true_urgency.rank < 0 || r.true_urgency.rank >= cfg.workload.levels) {
      throw ConfigError("request " + std::to_string(r.id) + " has an out-of-range urgency");
    }
  }
  apply_predictions(requests, cfg);
  return Simulation(cfg, std::move(requests)).run();
}

}  // namespace semsched
