// Copyright 2026 The rrgivens Authors.
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

#include "rrgivens/worker_pool.hpp"

#include <algorithm>

#include "rrgivens/errors.hpp"

namespace rrgivens {

namespace {

std::pair<std::size_t, std::size_t> chunk(std::size_t count, std::size_t parts, std::size_t k) {
  const std::size_t per = (count + parts - 1) / parts;
  const std::size_t begin = std::min(count, k * per);
  return {begin, std::min(count, begin + per)};
}

}  // namespace

WorkerPool::WorkerPool(std::size_t workers) : workers_(workers) {
  if (workers_ == 0) throw ParameterError("worker count must be >= 1");
  threads_.reserve(workers_ - 1);
  for (std::size_t t = 1; t < workers_; ++t) threads_.emplace_back([this, t] { worker_loop(t); });
}

WorkerPool::~WorkerPool() {
  {
    std::lock_guard lock(mutex_);
    stopping_ = true;
  }
  start_cv_.notify_all();
  for (auto& t : threads_) t.join();
}

WorkerPool& WorkerPool::serial() {
  static WorkerPool pool(1);
  return pool;
}

std::size_t WorkerPool::hardware_workers() {
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

void WorkerPool::parallel_for(std::size_t count, const RangeFn& fn) {
  if (count == 0) return;
  if (workers_ == 1 || count == 1) {
    fn(0, count);
    return;
  }
  {
    std::lock_guard lock(mutex_);
    task_ = &fn;
    count_ = count;
    pending_ = workers_ - 1;
    ++generation_;
  }
  start_cv_.notify_all();

  auto [begin, end] = chunk(count, workers_, 0);
  if (begin < end) fn(begin, end);

  std::unique_lock lock(mutex_);
  done_cv_.wait(lock, [this] { return pending_ == 0; });
  task_ = nullptr;
}

void WorkerPool::worker_loop(std::size_t index) {
  std::size_t seen = 0;
  for (;;) {
    const RangeFn* task;
    std::size_t count;
    {
      std::unique_lock lock(mutex_);
      start_cv_.wait(lock, [&] { return stopping_ || generation_ != seen; });
      if (stopping_) return;
      seen = generation_;
      task = task_;
      count = count_;
    }
    auto [begin, end] = chunk(count, workers_, index);
    if (begin < end) (*task)(begin, end);
    {
      std::lock_guard lock(mutex_);
      if (--pending_ == 0) done_cv_.notify_one();
    }
  }
}

}  // namespace rrgivens
