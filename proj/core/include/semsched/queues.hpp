// Copyright 2026 The semsched Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <thread>
#include <unordered_set>
#include <utility>
#include <vector>

#include "semsched/request.hpp"

namespace semsched {

// Binary min-heap of (id, key) entries with an id -> slot position map, so
// that arbitrary entries can be deleted or re-keyed in O(log n). Ids must be
// non-negative; the position map is a dense vector indexed by id.
template <class Key, class Compare = std::less<Key>>
class IndexedHeap {
 public:
  struct Entry {
    RequestId id;
    Key key;
  };

  explicit IndexedHeap(Compare less = Compare()) : less_(std::move(less)) {}

  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }

  bool contains(RequestId id) const {
    return id >= 0 && static_cast<std::size_t>(id) < pos_.size() && pos_[id] != kAbsent;
  }

  // Throws std::invalid_argument on a negative or already present id.
  void push(RequestId id, Key key) {
    if (id < 0) throw std::invalid_argument("IndexedHeap: negative id");
    if (contains(id)) throw std::invalid_argument("IndexedHeap: duplicate id");
    if (static_cast<std::size_t>(id) >= pos_.size()) pos_.resize(id + 1, kAbsent);
    heap_.push_back(Entry{id, std::move(key)});
    pos_[id] = heap_.size() - 1;
    sift_up(heap_.size() - 1);
  }

  void push_back(std::span<const Entry> entries) {
    for (const auto& e : entries) push(e.id, e.key);
  }

  // O(1). Empty optional on an empty heap.
  std::optional<Entry> peek() const {
    if (heap_.empty()) return std::nullopt;
    return heap_.front();
  }

  std::optional<Entry> pop() {
    if (heap_.empty()) return std::nullopt;
    Entry top = heap_.front();
    remove_at(0);
    return top;
  }

  // Returns false when id is not present.
  bool erase(RequestId id) {
    if (!contains(id)) return false;
    remove_at(pos_[id]);
    return true;
  }

  // Re-keys a present entry or inserts a new one.
  void upsert(RequestId id, Key key) {
    if (!contains(id)) {
      push(id, std::move(key));
      return;
    }
    const std::size_t slot = pos_[id];
    heap_[slot].key = std::move(key);
    sift_up(slot);
    sift_down(pos_[id]);
  }

  const Key* key_of(RequestId id) const {
    return contains(id) ? &heap_[pos_[id]].key : nullptr;
  }

  // Heap order and position map agree with the stored entries.
  bool check_invariants() const {
    std::size_t mapped = 0;
    for (std::size_t i = 0; i < heap_.size(); ++i) {
      const RequestId id = heap_[i].id;
      if (id < 0 || static_cast<std::size_t>(id) >= pos_.size() || pos_[id] != i) return false;
      if (i > 0 && less_(heap_[i].key, heap_[(i - 1) / 2].key)) return false;
    }
    for (std::size_t p : pos_) mapped += p != kAbsent;
    return mapped == heap_.size();
  }

  std::span<const Entry> entries() const { return heap_; }

  void clear() {
    for (const auto& e : heap_) pos_[e.id] = kAbsent;
    heap_.clear();
  }

 private:
  static constexpr std::size_t kAbsent = static_cast<std::size_t>(-1);

  void swap_slots(std::size_t a, std::size_t b) {
    std::swap(heap_[a], heap_[b]);
    pos_[heap_[a].id] = a;
    pos_[heap_[b].id] = b;
  }

  void sift_up(std::size_t i) {
    while (i > 0) {
      const std::size_t parent = (i - 1) / 2;
      if (!less_(heap_[i].key, heap_[parent].key)) break;
      swap_slots(i, parent);
      i = parent;
    }
  }

  void sift_down(std::size_t i) {
    const std::size_t n = heap_.size();
    for (;;) {
      std::size_t best = i;
      const std::size_t l = 2 * i + 1, r = l + 1;
      if (l < n && less_(heap_[l].key, heap_[best].key)) best = l;
      if (r < n && less_(heap_[r].key, heap_[best].key)) best = r;
      if (best == i) return;
      swap_slots(i, best);
      i = best;
    }
  }

  void remove_at(std::size_t slot) {
    const std::size_t last = heap_.size() - 1;
    pos_[heap_[slot].id] = kAbsent;
    if (slot != last) {
      heap_[slot] = std::move(heap_[last]);
      pos_[heap_[slot].id] = slot;
      heap_.pop_back();
      if (slot > 0 && less_(heap_[slot].key, heap_[(slot - 1) / 2].key)) {
        sift_up(slot);
      } else {
        sift_down(slot);
      }
    } else {
      heap_.pop_back();
    }
  }

  std::vector<Entry> heap_;
  std::vector<std::size_t> pos_;
  Compare less_;
};

// Requests waiting for dispatch, ordered by PriorityKey (smallest first).
using DispatchQueue = IndexedHeap<PriorityKey>;

// Device-resident requests keyed by eviction_priority(dispatch key). The root
// is the next victim: the resident request the dispatch order serves last.
class EvictionQueue {
 public:
  using Entry = IndexedHeap<PriorityKey>::Entry;

  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }
  bool contains(RequestId id) const { return heap_.contains(id); }

  // Takes the dispatch key and stores its eviction key.
  void insert(RequestId id, const PriorityKey& dispatch_key) {
    heap_.upsert(id, eviction_priority(dispatch_key));
  }
  bool erase(RequestId id) { return heap_.erase(id); }

  // Returned keys are eviction keys.
  std::optional<Entry> peek() const { return heap_.peek(); }
  std::optional<Entry> pop() { return heap_.pop(); }

  bool check_invariants() const { return heap_.check_invariants(); }
  std::span<const Entry> entries() const { return heap_.entries(); }

 private:
  IndexedHeap<PriorityKey> heap_;
};

// Unsorted buffer of newly predicted requests awaiting heap insertion.
//
// Single-producer/single-consumer: the first thread to call append() becomes
// the producer and the first thread to call drain() becomes the consumer; a
// call from any other thread throws std::logic_error. Both roles may be held
// by the same thread.
class ArrivalBuffer {
 public:
  ArrivalBuffer() = default;
  ArrivalBuffer(const ArrivalBuffer&) = delete;
  ArrivalBuffer& operator=(const ArrivalBuffer&) = delete;

  // O(1) amortized. Throws std::invalid_argument on a duplicate id.
  void append(RequestId id);

  // Removes every buffered id in append order.
  std::vector<RequestId> take_all();

  // Snapshot in append order.
  std::vector<RequestId> snapshot() const;

  std::size_t size() const;
  bool empty() const { return size() == 0; }
  bool contains(RequestId id) const;

 private:
  static void claim(std::atomic<std::thread::id>& owner, const char* role);

  mutable std::mutex mu_;
  std::vector<RequestId> items_;
  std::unordered_set<RequestId> ids_;
  std::atomic<std::thread::id> producer_{};
  std::atomic<std::thread::id> consumer_{};
};

// Appends a Waiting request. Throws std::invalid_argument if the request is
// not Waiting or is already buffered.
void buffer_append(ArrivalBuffer& buffer, const Request& r);

using KeyFunction = std::function<PriorityKey(const Request&)>;

// Moves every buffered request into the heap under key(request). Ids index
// into `pool`.
void drain_buffer(ArrivalBuffer& buffer, DispatchQueue& heap, std::span<const Request> pool,
                  const KeyFunction& key);

}  // namespace semsched
