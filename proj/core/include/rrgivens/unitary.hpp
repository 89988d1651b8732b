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

#ifndef RRGIVENS_UNITARY_HPP_
#define RRGIVENS_UNITARY_HPP_

// Unitary extension: each rotation carries a phase e^{i phi} on the i-th
// column of its Givens block,
//   G_ii = e^{i phi} cos(theta), G_ij = -sin(theta),
//   G_ji = e^{i phi} sin(theta), G_jj = cos(theta).
//
// Gradient convention for a real loss L of complex U: gamma packs
//   gamma(k, l) = dL/dRe(U_kl) + i dL/dIm(U_kl),
// and every parameter derivative is dL/da = sum_kl Re(conj(gamma_kl) dU_kl/da).
// The sweep mirrors the real case with m_mat = U^{k:n-1} gamma^H. For a pair
// e = (i, j) with c = cos(theta_e), s = sin(theta_e):
//   dL/dtheta_e = Re(M_{i:} . u_j - M_{j:} . u_i)
//   dL/dphi_e   = Re(i (c M_{i:} + s M_{j:}) . (c u_i + s u_j))
// The phi term is the contraction of the rank-one derivative
// i (c u_i + s u_j)(c v_i + s v_j)^H.

#include <cstddef>
#include <string>
#include <vector>

#include "rrgivens/backward.hpp"
#include "rrgivens/dense_matrix.hpp"
#include "rrgivens/forward.hpp"
#include "rrgivens/schedule.hpp"
#include "rrgivens/worker_pool.hpp"

namespace rrgivens {

// Phase angles in radians, same flat order as the AngleSet they accompany.
struct PhaseSet {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  friend bool operator==(const PhaseSet&, const PhaseSet&) = default;
};

struct ComplexGradientResult {
  std::vector<double> d_theta;
  std::vector<double> d_phi;
  std::vector<std::string> diagnostics;
};

struct ComplexBackwardWorkspace {
  ComplexBackwardWorkspace() = default;
  ComplexBackwardWorkspace(std::size_t n, std::size_t n_effective)
      : u_fwd_t(n, n), m_mat(n, n), a_mat(n_effective, n), d_vec(n_effective) {}

  ComplexMatrix u_fwd_t;  // transpose (not adjoint) of U^{1:k-1}
  ComplexMatrix m_mat;
  // Rows [0, h) hold theta terms and rows [h, 2h) phi terms, h = n_effective / 2.
  Matrix a_mat;
  std::vector<double> d_vec;
};

ComplexMatrix forward_unitary(const RotationSchedule& s, const AngleSet& theta,
                              const PhaseSet& phi, WorkerPool& pool);

inline ComplexMatrix forward_unitary(const RotationSchedule& s, const AngleSet& theta,
                                     const PhaseSet& phi) {
  return forward_unitary(s, theta, phi, WorkerPool::serial());
}

ComplexGradientResult jvp_unitary(const RotationSchedule& s, const AngleSet& theta,
                                  const PhaseSet& phi, const ComplexMatrix& u,
                                  const ComplexMatrix& gamma, WorkerPool& pool,
                                  ComplexBackwardWorkspace& ws);

inline ComplexGradientResult jvp_unitary(const RotationSchedule& s, const AngleSet& theta,
                                         const PhaseSet& phi, const ComplexMatrix& u,
                                         const ComplexMatrix& gamma, WorkerPool& pool) {
  ComplexBackwardWorkspace ws(s.n(), s.n_effective());
  return jvp_unitary(s, theta, phi, u, gamma, pool, ws);
}

inline ComplexGradientResult jvp_unitary(const RotationSchedule& s, const AngleSet& theta,
                                         const PhaseSet& phi, const ComplexMatrix& u,
                                         const ComplexMatrix& gamma) {
  return jvp_unitary(s, theta, phi, u, gamma, WorkerPool::serial());
}

// max |(U^H U - I)_kl|
double unitarity_error(const ComplexMatrix& u);

}  // namespace rrgivens

#endif  // RRGIVENS_UNITARY_HPP_
