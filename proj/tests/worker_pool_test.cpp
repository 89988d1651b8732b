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

#include <gtest/gtest.h>

#include <atomic>
#include <numeric>
#include <vector>

#include "rrgivens/errors.hpp"

namespace rrgivens {
namespace {

TEST(WorkerPoolTest, CoversEveryIndexExactlyOnce) {
  for (std::size_t workers : {1u, 2u, 3u, 8u}) {
    WorkerPool pool(workers);
    EXPECT_EQ(pool.size(), workers);
    for (std::size_t count : {0u, 1u, 5u, 64u, 1001u}) {
      std::vector<std::atomic<int>> hits(count);
      pool.parallel_for(count, [&](std::size_t b, std::size_t e) {
        for (std::size_t k = b; k < e; ++k) hits[k].fetch_add(1);
      });
      for (std::size_t k = 0; k < count; ++k)
        ASSERT_EQ(hits[k].load(), 1) << "workers=" << workers << " count=" << count;
    }
  }
}

TEST(WorkerPoolTest, ReusableAcrossManyDispatches) {
  WorkerPool pool(4);
  std::atomic<long> total{0};
  for (int round = 0; round < 500; ++round) {
    pool.parallel_for(17, [&](std::size_t b, std::size_t e) {
      long local = 0;
      for (std::size_t k = b; k < e; ++k) local += static_cast<long>(k);
      total += local;
    });
  }
  EXPECT_EQ(total.load(), 500L * (16 * 17 / 2));
}

TEST(WorkerPoolTest, RejectsZeroWorkers) { EXPECT_THROW(WorkerPool(0), ParameterError); }

TEST(WorkerPoolTest, SerialPoolHasOneWorker) {
  EXPECT_EQ(WorkerPool::serial().size(), 1u);
  EXPECT_GE(WorkerPool::hardware_workers(), 1u);
}

}  // namespace
}  // namespace rrgivens
