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

#ifndef RRGIVENS_BACKWARD_HPP_
#define RRGIVENS_BACKWARD_HPP_

// Block-parallel gradient of a loss with respect to the rotation angles.
//
// With Gamma = dL/dU, the blocks are swept in reverse order while two
// matrices are kept in place:
//   U^fwd = U^{1:k-1}, the product of the blocks before b_k, obtained from U
//           by removing one block at a time (right-multiplying by G^T);
//   M     = U^{k:n-1} Gamma^T, started at Gamma^T and left-multiplied by
//           each block (row rotations, the same update as the forward pass).
// For a pair e = (i, j) of block b_k,
//   dL/dtheta_e = M_{i:} . u_j - M_{j:} . u_i,
// with u_j the j-th column of U^fwd. Each active pair fills one row of
// a_mat with the element-wise terms; each row is then summed with a
// fixed-shape pairwise reduction, so results do not depend on the worker
// count.
//
// U^fwd is stored transposed (u_fwd_t). Its column rotations become row
// rotations and the columns u_i, u_j become contiguous rows; the element
// arithmetic is the same as rotate_cols_inverse on U^fwd.

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "rrgivens/dense_matrix.hpp"
#include "rrgivens/forward.hpp"
#include "rrgivens/schedule.hpp"
#include "rrgivens/worker_pool.hpp"

namespace rrgivens {

template <typename T>
struct BasicGradientResult {
  std::vector<T> d_theta;  // flat order, one entry per active pair
  std::vector<std::string> diagnostics;
};

using GradientResult = BasicGradientResult<double>;
using GradientResultF = BasicGradientResult<float>;

template <typename T>
struct BackwardWorkspace {
  BackwardWorkspace() = default;
  BackwardWorkspace(std::size_t n, std::size_t n_effective)
      : u_fwd_t(n, n), m_mat(n, n), a_mat(n_effective / 2, n), d_vec(n_effective / 2) {}

  DenseMatrix<T> u_fwd_t;  // transpose of U^{1:k-1}
  DenseMatrix<T> m_mat;
  DenseMatrix<T> a_mat;
  std::vector<T> d_vec;
};

// Called after the u_fwd_t and m_mat updates of each block (block index in
// schedule order), before the gradient rows are assembled.
template <typename T>
using BlockObserver = std::function<void(std::size_t block, const BackwardWorkspace<T>&)>;

// Orthogonality probe used to flag a stale `u`: checks up to 32 sampled
// column pairs and returns the largest deviation from the identity Gram
// entries.
template <typename T>
double sampled_orthogonality_error(const DenseMatrix<T>& u);

inline constexpr double kStaleUThreshold = 1e-6;
// Single precision accumulates ~1e-5 orthogonality error at moderate n.
inline constexpr double kStaleUThresholdF = 1e-3;

// dL/dtheta for U = forward_parallel(s, theta) (no reflection). gamma is
// n x n with gamma(k, l) = dL/dU_{kl}. Throws ParameterError on shape or
// length mismatch; a non-orthogonal u only adds a diagnostic.
template <typename T>
BasicGradientResult<T> jvp_parallel(const RotationSchedule& s, const BasicAngleSet<T>& theta,
                                    const DenseMatrix<T>& u, const DenseMatrix<T>& gamma,
                                    WorkerPool& pool, BackwardWorkspace<T>& ws,
                                    const BlockObserver<T>& observer = {});

template <typename T>
BasicGradientResult<T> jvp_parallel(const RotationSchedule& s, const BasicAngleSet<T>& theta,
                                    const DenseMatrix<T>& u, const DenseMatrix<T>& gamma,
                                    WorkerPool& pool) {
  BackwardWorkspace<T> ws(s.n(), s.n_effective());
  return jvp_parallel(s, theta, u, gamma, pool, ws);
}

template <typename T>
BasicGradientResult<T> jvp_parallel(const RotationSchedule& s, const BasicAngleSet<T>& theta,
                                    const DenseMatrix<T>& u, const DenseMatrix<T>& gamma) {
  return jvp_parallel(s, theta, u, gamma, WorkerPool::serial());
}

// Gradient through a reflected U (cfg.reflect = true). The reflection is a
// fixed column sign flip, so this un-flips u, flips the same column of gamma,
// and defers to jvp_parallel.
template <typename T>
BasicGradientResult<T> jvp_with_reflection(const RotationSchedule& s,
                                           const BasicAngleSet<T>& theta,
                                           const DenseMatrix<T>& u_reflected,
                                           const DenseMatrix<T>& gamma,
                                           const OrthogonalConfig& cfg, WorkerPool& pool);

template <typename T>
BasicGradientResult<T> jvp_with_reflection(const RotationSchedule& s,
                                           const BasicAngleSet<T>& theta,
                                           const DenseMatrix<T>& u_reflected,
                                           const DenseMatrix<T>& gamma,
                                           const OrthogonalConfig& cfg) {
  return jvp_with_reflection(s, theta, u_reflected, gamma, cfg, WorkerPool::serial());
}

}  // namespace rrgivens

#endif  // RRGIVENS_BACKWARD_HPP_
