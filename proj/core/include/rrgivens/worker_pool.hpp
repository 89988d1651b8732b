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

#ifndef RRGIVENS_WORKER_POOL_HPP_
#define RRGIVENS_WORKER_POOL_HPP_

#include <condition_variable>
#include <cstddef>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace rrgivens {

// Fixed-size pool that runs one data-parallel loop at a time. parallel_for
// splits [0, count) into size() contiguous chunks, runs chunk 0 on the
// calling thread and the rest on the pool's threads, and returns only after
// every chunk has finished; that return is the barrier between block steps.
//
// A pool of size 1 spawns no threads. One pool must not run two loops
// concurrently; callers that need that use separate pools.
class WorkerPool {
 public:
  using RangeFn = std::function<void(std::size_t begin, std::size_t end)>;

  explicit WorkerPool(std::size_t workers = 1);
  ~WorkerPool();

  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  std::size_t size() const { return workers_; }

  void parallel_for(std::size_t count, const RangeFn& fn);

  // Serial pool shared by the convenience overloads.
  static WorkerPool& serial();

  static std::size_t hardware_workers();

 private:
  void worker_loop(std::size_t index);

  std::size_t workers_;
  std::vector<std::thread> threads_;

  std::mutex mutex_;
  std::condition_variable start_cv_;
  std::condition_variable done_cv_;
  const RangeFn* task_ = nullptr;
  std::size_t count_ = 0;
  std::size_t generation_ = 0;
  std::size_t pending_ = 0;
  bool stopping_ = false;
};

}  // namespace rrgivens

#endif  // RRGIVENS_WORKER_POOL_HPP_
