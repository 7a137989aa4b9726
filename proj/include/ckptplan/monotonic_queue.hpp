// Copyright 2026 The ckptplan Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cassert>
#include <cstddef>
#include <deque>
#include <functional>
#include <utility>

namespace ckptplan {

// Sliding-window argmin over (index, key) pairs pushed in increasing index
// order. Keys are non-decreasing from head to tail; equal keys keep the older
// (smaller) index closer to the head, so the head is the smallest index among
// the window minima.
template <class Key, class Compare = std::less<Key>>
class MonotonicQueue {
 public:
  struct Entry {
    std::size_t index;
    Key key;
  };

  void Push(std::size_t index, Key key) {
    assert(entries_.empty() || entries_.back().index < index);
    while (!entries_.empty() && compare_(key, entries_.back().key)) {
      entries_.pop_back();
    }
    entries_.push_back({index, std::move(key)});
  }

  // Drops head entries whose index is below the window start.
  void EvictBefore(std::size_t window_start) {
    while (!entries_.empty() && entries_.front().index < window_start) {
      entries_.pop_front();
    }
  }

  const Entry& Head() const {
    assert(!entries_.empty());
    return entries_.front();
  }

  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  void clear() { entries_.clear(); }

  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

 private:
  std::deque<Entry> entries_;
  Compare compare_;
};

}  // namespace ckptplan
