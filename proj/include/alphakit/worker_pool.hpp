// Copyright (c) 2026, The alphakit Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <condition_variable>
#include <cstddef>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

namespace alphakit {

/// Runs produce(i) for every i in [0, count) on `workers` threads and hands
/// each result to consume(i, result) on the calling thread in increasing
/// index order. At most `window` produced-but-unconsumed results exist at a
/// time (default 2 * workers), which bounds memory for large batches.
///
/// produce must be safe to call concurrently for distinct indices. The
/// first exception thrown by produce is rethrown from here, in index order,
/// after all workers have stopped.
template <typename Result>
void ordered_parallel_map(std::size_t count, int workers,
                          const std::function<Result(std::size_t)>& produce,
                          const std::function<void(std::size_t, Result&&)>& consume,
                          std::size_t window = 0) {
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) consume(i, produce(i));
    return;
  }
  const std::size_t thread_count = std::min<std::size_t>(static_cast<std::size_t>(workers), count);
  if (window == 0) window = 2 * thread_count;
  window = std::max(window, thread_count);

  struct Slot {
    std::optional<Result> value;
    std::exception_ptr error;
  };
  std::mutex mutex;
  std::condition_variable produced;
  std::condition_variable consumed;
  std::map<std::size_t, Slot> ready;
  std::size_t next_claim = 0;
  std::size_t next_emit = 0;
  bool abort = false;

  auto worker = [&] {
    while (true) {
      std::size_t index;
      {
        std::unique_lock lock(mutex);
        consumed.wait(lock, [&] { return abort || next_claim < next_emit + window; });
        if (abort || next_claim >= count) return;
        index = next_claim++;
      }
      Slot slot;
      try {
        slot.value.emplace(produce(index));
      } catch (...) {
        slot.error = std::current_exception();
      }
      {
        std::lock_guard lock(mutex);
        ready.emplace(index, std::move(slot));
      }
      produced.notify_one();
    }
  };

  std::vector<std::thread> threads;
  threads.reserve(thread_count);
  for (std::size_t t = 0; t < thread_count; ++t) threads.emplace_back(worker);

  std::exception_ptr failure;
  while (next_emit < count) {
    Slot slot;
    {
      std::unique_lock lock(mutex);
      produced.wait(lock, [&] { return ready.count(next_emit) != 0; });
      auto node = ready.extract(next_emit);
      slot = std::move(node.mapped());
    }
    if (slot.error) {
      failure = slot.error;
      break;
    }
    try {
      consume(next_emit, std::move(*slot.value));
    } catch (...) {
      failure = std::current_exception();
      break;
    }
    {
      std::lock_guard lock(mutex);
      ++next_emit;
    }
    consumed.notify_all();
  }
  {
    std::lock_guard lock(mutex);
    if (failure) abort = true;
  }
  consumed.notify_all();
  for (std::thread& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
}

/// Unordered convenience wrapper: fills results[i] = produce(i).
template <typename Result>
std::vector<Result> parallel_collect(std::size_t count, int workers,
                                     const std::function<Result(std::size_t)>& produce) {
  std::vector<std::optional<Result>> slots(count);
  ordered_parallel_map<Result>(count, workers, produce,
                               [&](std::size_t i, Result&& r) { slots[i].emplace(std::move(r)); });
  std::vector<Result> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace alphakit
