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

#ifndef RRGIVENS_FORWARD_HPP_
#define RRGIVENS_FORWARD_HPP_

#include <cstddef>
#include <vector>

#include "rrgivens/dense_matrix.hpp"
#include "rrgivens/schedule.hpp"
#include "rrgivens/worker_pool.hpp"

namespace rrgivens {

// Rotation angles in radians, one per active pair of a schedule, in the
// schedule's flat (block-major) order. No range reduction is applied, so
// angles differing by 2*pi describe the same rotation.
template <typename T>
struct BasicAngleSet {
  std::vector<T> values;

  std::size_t size() const { return values.size(); }
  friend bool operator==(const BasicAngleSet&, const BasicAngleSet&) = default;
};

using AngleSet = BasicAngleSet<double>;
using AngleSetF = BasicAngleSet<float>;

// Reflection: negate one fixed column after the rotation product, which
// moves U to the determinant -1 component.
struct OrthogonalConfig {
  bool reflect = false;
  std::size_t reflect_column = 0;
};

// U = prod_e G^e(theta_e), built from the identity by applying the blocks in
// reverse order, each block's rotations concurrently on pool. The result
// does not depend on pool.size().
template <typename T>
DenseMatrix<T> forward_parallel(const RotationSchedule& s, const BasicAngleSet<T>& theta,
                                const OrthogonalConfig& cfg, WorkerPool& pool);

template <typename T>
DenseMatrix<T> forward_parallel(const RotationSchedule& s, const BasicAngleSet<T>& theta,
                                const OrthogonalConfig& cfg = {}) {
  return forward_parallel(s, theta, cfg, WorkerPool::serial());
}

// Same construction for schedules with m_active < n. Pairs with i >= m_active
// are bypassed by the kernels; theta indexes active pairs only.
template <typename T>
DenseMatrix<T> forward_restricted(const RotationSchedule& s, const BasicAngleSet<T>& theta,
                                  const OrthogonalConfig& cfg, WorkerPool& pool) {
  return forward_parallel(s, theta, cfg, pool);
}

template <typename T>
DenseMatrix<T> forward_restricted(const RotationSchedule& s, const BasicAngleSet<T>& theta,
                                  const OrthogonalConfig& cfg = {}) {
  return forward_parallel(s, theta, cfg, WorkerPool::serial());
}

// Negates column `column` in place.
template <typename T>
void negate_column(DenseMatrix<T>& mat, std::size_t column);

namespace detail {

void check_angle_count(const RotationSchedule& s, std::size_t count, const char* what);

}  // namespace detail

}  // namespace rrgivens

#endif  // RRGIVENS_FORWARD_HPP_
