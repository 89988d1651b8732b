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

#ifndef RRGIVENS_REDUCTION_HPP_
#define RRGIVENS_REDUCTION_HPP_

#include <cstddef>
#include <span>

namespace rrgivens {

inline constexpr std::size_t kPairwiseLeaf = 16;

// Pairwise (tree) summation with a fixed split: leaves of at most
// kPairwiseLeaf elements are summed left to right, halves are combined.
// The association order depends only on x.size().
template <typename T>
T pairwise_sum(std::span<const T> x) {
  if (x.size() <= kPairwiseLeaf) {
    T acc{};
    for (const T& v : x) acc += v;
    return acc;
  }
  const std::size_t half = x.size() / 2;
  return pairwise_sum(x.first(half)) + pairwise_sum(x.subspan(half));
}

}  // namespace rrgivens

#endif  // RRGIVENS_REDUCTION_HPP_
