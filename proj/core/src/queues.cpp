// Copyright 2026 The semsched Authors
// SPDX-License-Identifier: Apache-2.0

#include "semsched/queues.hpp"

#include <string>

namespace semsched {

void ArrivalBuffer::claim(std::atomic<std::thread::id>& owner, const char* role) {
  const auto self = std::this_thread::get_id();
  std::thread::id expected{};
  if (owner.compare_exchange_strong(expected, self) || expected == self) return;
  throw std::logic_error(std::string("ArrivalBuffer: second ") + role +
                         " thread violates the single-producer/single-consumer contract");
}

void ArrivalBuffer::append(RequestId id) {
  claim(producer_, "producer");
  std::lock_guard lock(mu_);
  if (!ids_.insert(id).second) {
    throw std::invalid_argument("ArrivalBuffer: request " + std::to_string(id) +
                                " is already buffered");
  }
  items_.push_back(id);
}

std::vector<RequestId> ArrivalBuffer::take_all() {
  claim(consumer_, "consumer");
  std::vector<RequestId> out;
  std::lock_guard lock(mu_);
  out.swap(items_);
  ids_.clear();
  return out;
}

std::vector<RequestId> ArrivalBuffer::snapshot() const {
  std::lock_guard lock(mu_);
  return items_;
}

std::size_t ArrivalBuffer::size() const {
  std::lock_guard lock(mu_);
  return items_.size();
}

bool ArrivalBuffer::contains(RequestId id) const {
  std::lock_guard lock(mu_);
  return ids_.contains(id);
}

void buffer_append(ArrivalBuffer& buffer, const Request& r) {
  if (r.stage != Stage::Waiting) {
    throw std::invalid_argument("buffer_append: request " + std::to_string(r.id) +
                                " is not waiting");
  }
  buffer.append(r.id);
}

void drain_buffer(ArrivalBuffer& buffer, DispatchQueue& heap, std::span<const Request> pool,
                  const KeyFunction& key) {
  for (RequestId id : buffer.take_all()) {
    heap.push(id, key(pool[static_cast<std::size_t>(id)]));
  }
}

}  // namespace semsched
