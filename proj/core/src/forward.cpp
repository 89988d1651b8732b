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

#include "rrgivens/forward.hpp"

#include <string>

#include "rrgivens/errors.hpp"
#include "rrgivens/kernels.hpp"

namespace rrgivens {

namespace detail {

void check_angle_count(const RotationSchedule& s, std::size_t count, const char* what) {
  if (count != s.active_count()) {
    throw ParameterError(std::string(what) + ": expected " + std::to_string(s.active_count()) +
                         " angles for the schedule, got " + std::to_string(count));
  }
}

}  // namespace detail

template <typename T>
void negate_column(DenseMatrix<T>& mat, std::size_t column) {
  if (column >= mat.cols()) {
    throw ParameterError("reflect column " + std::to_string(column) + " out of range for " +
                         std::to_string(mat.cols()) + " columns");
  }
  for (std::size_t r = 0; r < mat.rows(); ++r) mat(r, column) = -mat(r, column);
}

template <typename T>
DenseMatrix<T> forward_parallel(const RotationSchedule& s, const BasicAngleSet<T>& theta,
                                const OrthogonalConfig& cfg, WorkerPool& pool) {
  detail::check_angle_count(s, theta.size(), "forward_parallel");
  const std::size_t n = s.n();
  if (cfg.reflect && cfg.reflect_column >= n) {
    throw ParameterError("reflect column " + std::to_string(cfg.reflect_column) +
                         " out of range for n = " + std::to_string(n));
  }

  std::vector<RotationParams<T>> params(theta.size());
  for (std::size_t f = 0; f < theta.size(); ++f)
    params[f] = RotationParams<T>::from_angle(theta.values[f]);

  auto u = DenseMatrix<T>::identity(n);
  for (std::size_t b = s.num_blocks(); b-- > 0;) {
    const auto slots = s.active_slots(b);
    pool.parallel_for(slots.size(), [&](std::size_t lo, std::size_t hi) {
      for (std::size_t k = lo; k < hi; ++k) {
        const auto& a = slots[k];
        const auto& p = params[a.flat];
        detail::rotate_row_pair(u.row(a.pair.i).data(), u.row(a.pair.j).data(), n, p.cos_theta,
                                p.sin_theta);
      }
    });
  }
  if (cfg.reflect) negate_column(u, cfg.reflect_column);
  return u;
}

template DenseMatrix<double> forward_parallel(const RotationSchedule&, const BasicAngleSet<double>&,
                                              const OrthogonalConfig&, WorkerPool&);
template DenseMatrix<float> forward_parallel(const RotationSchedule&, const BasicAngleSet<float>&,
                                             const OrthogonalConfig&, WorkerPool&);
template void negate_column(DenseMatrix<double>&, std::size_t);
template void negate_column(DenseMatrix<float>&, std::size_t);
template void negate_column(ComplexMatrix&, std::size_t);

}  // namespace rrgivens
