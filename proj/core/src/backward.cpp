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

#include "rrgivens/backward.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <type_traits>

#include "rrgivens/errors.hpp"
#include "rrgivens/kernels.hpp"
#include "rrgivens/reduction.hpp"

namespace rrgivens {

namespace {

template <typename T>
void check_square(const DenseMatrix<T>& m, std::size_t n, const char* what) {
  if (m.rows() != n || m.cols() != n) {
    throw ParameterError(std::string(what) + " must be " + std::to_string(n) + "x" +
                         std::to_string(n) + ", got " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()));
  }
}

}  // namespace

template <typename T>
double sampled_orthogonality_error(const DenseMatrix<T>& u) {
  const std::size_t n = u.cols();
  if (n == 0) return 0.0;
  const std::size_t samples = std::min<std::size_t>(n, 32);
  const std::size_t stride = std::max<std::size_t>(1, n / samples);
  double worst = 0.0;
  for (std::size_t k = 0; k < samples; ++k) {
    const std::size_t c1 = (k * stride) % n;
    const std::size_t c2 = (c1 + k) % n;
    double dot = 0.0;
    for (std::size_t r = 0; r < u.rows(); ++r)
      dot += static_cast<double>(u(r, c1)) * static_cast<double>(u(r, c2));
    worst = std::max(worst, std::abs(dot - (c1 == c2 ? 1.0 : 0.0)));
  }
  return worst;
}

template <typename T>
BasicGradientResult<T> jvp_parallel(const RotationSchedule& s, const BasicAngleSet<T>& theta,
                                    const DenseMatrix<T>& u, const DenseMatrix<T>& gamma,
                                    WorkerPool& pool, BackwardWorkspace<T>& ws,
                                    const BlockObserver<T>& observer) {
  detail::check_angle_count(s, theta.size(), "jvp_parallel");
  const std::size_t n = s.n();
  check_square(u, n, "u");
  check_square(gamma, n, "gamma");

  BasicGradientResult<T> result;
  result.d_theta.assign(theta.size(), T{});
  const double threshold = std::is_same_v<T, float> ? kStaleUThresholdF : kStaleUThreshold;
  if (const double err = sampled_orthogonality_error(u); err > threshold) {
    std::ostringstream os;
    os << "jvp_parallel: u deviates from orthogonality by " << err
       << " (stale u or reflected u passed to jvp_parallel?)";
    result.diagnostics.push_back(os.str());
  }

  if (ws.u_fwd_t.rows() != n || ws.a_mat.rows() != s.n_effective() / 2)
    ws = BackwardWorkspace<T>(n, s.n_effective());
  ws.u_fwd_t = u.transposed();
  ws.m_mat = gamma.transposed();

  std::vector<RotationParams<T>> params(theta.size());
  for (std::size_t f = 0; f < theta.size(); ++f)
    params[f] = RotationParams<T>::from_angle(theta.values[f]);

  std::vector<BoundRotation<RotationParams<T>>> rotations;
  rotations.reserve(s.n_effective() / 2);

  for (std::size_t b = s.num_blocks(); b-- > 0;) {
    const auto slots = s.active_slots(b);
    if (slots.empty()) {
      if (observer) observer(b, ws);
      continue;
    }
    rotations.clear();
    for (const auto& a : slots) rotations.push_back({a.pair.i, a.pair.j, params[a.flat]});
    const std::span<const BoundRotation<RotationParams<T>>> block(rotations);

    // U^fwd <- U^fwd G^{b}^T, i.e. row rotations of its transpose.
    pool.parallel_for(block.size(), [&](std::size_t lo, std::size_t hi) {
      for (std::size_t k = lo; k < hi; ++k) {
        const auto& r = block[k];
        detail::rotate_row_pair(ws.u_fwd_t.row(r.i).data(), ws.u_fwd_t.row(r.j).data(), n,
                                r.params.cos_theta, r.params.sin_theta);
      }
    });

    // m_mat <- G^{b} * m_mat, one pair per task.
    pool.parallel_for(block.size(), [&](std::size_t lo, std::size_t hi) {
      for (std::size_t k = lo; k < hi; ++k) {
        const auto& r = block[k];
        detail::rotate_row_pair(ws.m_mat.row(r.i).data(), ws.m_mat.row(r.j).data(), n,
                                r.params.cos_theta, r.params.sin_theta);
      }
    });

    if (observer) observer(b, ws);

    // A_{m(e), l} = M_{il} u_{lj} - M_{jl} u_{li}, one pair per task.
    pool.parallel_for(slots.size(), [&](std::size_t lo, std::size_t hi) {
      for (std::size_t k = lo; k < hi; ++k) {
        const auto& a = slots[k];
        const T* mi = ws.m_mat.row(a.pair.i).data();
        const T* mj = ws.m_mat.row(a.pair.j).data();
        const T* ui = ws.u_fwd_t.row(a.pair.i).data();
        const T* uj = ws.u_fwd_t.row(a.pair.j).data();
        T* arow = ws.a_mat.row(a.slot).data();
        for (std::size_t l = 0; l < n; ++l) arow[l] = mi[l] * uj[l] - mj[l] * ui[l];
      }
    });

    // d = A 1_n, one row per task.
    pool.parallel_for(slots.size(), [&](std::size_t lo, std::size_t hi) {
      for (std::size_t k = lo; k < hi; ++k) {
        const std::size_t slot = slots[k].slot;
        ws.d_vec[slot] = pairwise_sum<T>(ws.a_mat.row(slot));
      }
    });

    for (const auto& a : slots) result.d_theta[a.flat] = ws.d_vec[a.slot];
  }
  return result;
}

template <typename T>
BasicGradientResult<T> jvp_with_reflection(const RotationSchedule& s,
                                           const BasicAngleSet<T>& theta,
                                           const DenseMatrix<T>& u_reflected,
                                           const DenseMatrix<T>& gamma,
                                           const OrthogonalConfig& cfg, WorkerPool& pool) {
  check_square(u_reflected, s.n(), "u");
  check_square(gamma, s.n(), "gamma");
  if (!cfg.reflect) return jvp_parallel(s, theta, u_reflected, gamma, pool);
  DenseMatrix<T> u = u_reflected;
  DenseMatrix<T> g = gamma;
  negate_column(u, cfg.reflect_column);
  negate_column(g, cfg.reflect_column);
  return jvp_parallel(s, theta, u, g, pool);
}

template double sampled_orthogonality_error(const DenseMatrix<double>&);
template double sampled_orthogonality_error(const DenseMatrix<float>&);

template BasicGradientResult<double> jvp_parallel(const RotationSchedule&, const AngleSet&,
                                                  const Matrix&, const Matrix&, WorkerPool&,
                                                  BackwardWorkspace<double>&,
                                                  const BlockObserver<double>&);
template BasicGradientResult<float> jvp_parallel(const RotationSchedule&, const AngleSetF&,
                                                 const MatrixF&, const MatrixF&, WorkerPool&,
                                                 BackwardWorkspace<float>&,
                                                 const BlockObserver<float>&);
template BasicGradientResult<double> jvp_with_reflection(const RotationSchedule&, const AngleSet&,
                                                         const Matrix&, const Matrix&,
                                                         const OrthogonalConfig&, WorkerPool&);
template BasicGradientResult<float> jvp_with_reflection(const RotationSchedule&, const AngleSetF&,
                                                        const MatrixF&, const MatrixF&,
                                                        const OrthogonalConfig&, WorkerPool&);

}  // namespace rrgivens
