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

#include "rrgivens/unitary.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include "rrgivens/errors.hpp"
#include "rrgivens/kernels.hpp"
#include "rrgivens/reduction.hpp"

namespace rrgivens {

namespace {

using cdouble = std::complex<double>;

void check_square(const ComplexMatrix& m, std::size_t n, const char* what) {
  if (m.rows() != n || m.cols() != n) {
    throw ParameterError(std::string(what) + " must be " + std::to_string(n) + "x" +
                         std::to_string(n) + ", got " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()));
  }
}

std::vector<PhaseRotationParams> phase_params(const RotationSchedule& s, const AngleSet& theta,
                                              const PhaseSet& phi, const char* what) {
  detail::check_angle_count(s, theta.size(), what);
  if (phi.size() != theta.size()) {
    throw ParameterError(std::string(what) + ": expected " + std::to_string(theta.size()) +
                         " phases, got " + std::to_string(phi.size()));
  }
  std::vector<PhaseRotationParams> params(theta.size());
  for (std::size_t f = 0; f < theta.size(); ++f)
    params[f] = PhaseRotationParams::from_angles(theta.values[f], phi.values[f]);
  return params;
}

// Same column-pair sampling as sampled_orthogonality_error.
double sampled_unitarity_error(const ComplexMatrix& u) {
  const std::size_t n = u.cols();
  const std::size_t samples = std::min<std::size_t>(n, 32);
  const std::size_t stride = std::max<std::size_t>(1, n / samples);
  double worst = 0.0;
  for (std::size_t k = 0; k < samples; ++k) {
    const std::size_t c1 = (k * stride) % n;
    const std::size_t c2 = (c1 + k) % n;
    cdouble dot{};
    for (std::size_t r = 0; r < u.rows(); ++r) dot += std::conj(u(r, c1)) * u(r, c2);
    worst = std::max(worst, std::abs(dot - (c1 == c2 ? cdouble{1.0} : cdouble{})));
  }
  return worst;
}

}  // namespace

double unitarity_error(const ComplexMatrix& u) {
  const std::size_t n = u.cols();
  double worst = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a; b < n; ++b) {
      cdouble acc{};
      for (std::size_t r = 0; r < u.rows(); ++r) acc += std::conj(u(r, a)) * u(r, b);
      worst = std::max(worst, std::abs(acc - (a == b ? cdouble{1.0} : cdouble{})));
    }
  }
  return worst;
}

ComplexMatrix forward_unitary(const RotationSchedule& s, const AngleSet& theta,
                              const PhaseSet& phi, WorkerPool& pool) {
  const auto params = phase_params(s, theta, phi, "forward_unitary");
  const std::size_t n = s.n();
  auto u = ComplexMatrix::identity(n);
  for (std::size_t b = s.num_blocks(); b-- > 0;) {
    const auto slots = s.active_slots(b);
    pool.parallel_for(slots.size(), [&](std::size_t lo, std::size_t hi) {
      for (std::size_t k = lo; k < hi; ++k) {
        const auto& a = slots[k];
        const auto& p = params[a.flat];
        detail::rotate_row_pair(u.row(a.pair.i).data(), u.row(a.pair.j).data(), n, p.phase_cos(),
                                p.phase_sin(), p.cos_theta, p.sin_theta);
      }
    });
  }
  return u;
}

ComplexGradientResult jvp_unitary(const RotationSchedule& s, const AngleSet& theta,
                                  const PhaseSet& phi, const ComplexMatrix& u,
                                  const ComplexMatrix& gamma, WorkerPool& pool,
                                  ComplexBackwardWorkspace& ws) {
  const auto params = phase_params(s, theta, phi, "jvp_unitary");
  const std::size_t n = s.n();
  const std::size_t half = s.n_effective() / 2;
  check_square(u, n, "u");
  check_square(gamma, n, "gamma");

  ComplexGradientResult result;
  result.d_theta.assign(theta.size(), 0.0);
  result.d_phi.assign(theta.size(), 0.0);
  if (const double err = sampled_unitarity_error(u); err > kStaleUThreshold) {
    std::ostringstream os;
    os << "jvp_unitary: u deviates from unitarity by " << err << " (stale u?)";
    result.diagnostics.push_back(os.str());
  }

  if (ws.u_fwd_t.rows() != n || ws.a_mat.rows() != 2 * half)
    ws = ComplexBackwardWorkspace(n, s.n_effective());
  ws.u_fwd_t = u.transposed();
  ws.m_mat = ComplexMatrix(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) ws.m_mat(r, c) = std::conj(gamma(c, r));

  std::vector<BoundRotation<PhaseRotationParams>> rotations;
  rotations.reserve(half);
  std::vector<std::size_t> rows;
  rows.reserve(2 * half);

  for (std::size_t b = s.num_blocks(); b-- > 0;) {
    const auto slots = s.active_slots(b);
    if (slots.empty()) continue;
    rotations.clear();
    for (const auto& a : slots) rotations.push_back({a.pair.i, a.pair.j, params[a.flat]});
    const std::span<const BoundRotation<PhaseRotationParams>> block(rotations);

    // U^fwd <- U^fwd G^{b}^H as row rotations of the transpose: the
    // coefficients are those of rotate_cols_inverse.
    pool.parallel_for(block.size(), [&](std::size_t lo, std::size_t hi) {
      for (std::size_t k = lo; k < hi; ++k) {
        const auto& r = block[k];
        detail::rotate_row_pair(ws.u_fwd_t.row(r.i).data(), ws.u_fwd_t.row(r.j).data(), n,
                                std::conj(r.params.phase_cos()), std::conj(r.params.phase_sin()),
                                r.params.cos_theta, r.params.sin_theta);
      }
    });

    pool.parallel_for(block.size(), [&](std::size_t lo, std::size_t hi) {
      for (std::size_t k = lo; k < hi; ++k) {
        const auto& r = block[k];
        detail::rotate_row_pair(ws.m_mat.row(r.i).data(), ws.m_mat.row(r.j).data(), n,
                                r.params.phase_cos(), r.params.phase_sin(), r.params.cos_theta,
                                r.params.sin_theta);
      }
    });

    pool.parallel_for(slots.size(), [&](std::size_t lo, std::size_t hi) {
      for (std::size_t k = lo; k < hi; ++k) {
        const double c = block[k].params.cos_theta;
        const double sn = block[k].params.sin_theta;
        const cdouble* mi = ws.m_mat.row(block[k].i).data();
        const cdouble* mj = ws.m_mat.row(block[k].j).data();
        const cdouble* ui = ws.u_fwd_t.row(block[k].i).data();
        const cdouble* uj = ws.u_fwd_t.row(block[k].j).data();
        double* a_theta = ws.a_mat.row(slots[k].slot).data();
        double* a_phi = ws.a_mat.row(half + slots[k].slot).data();
        for (std::size_t l = 0; l < n; ++l) {
          a_theta[l] = (mi[l] * uj[l] - mj[l] * ui[l]).real();
          // Re(i z) = -Im(z)
          a_phi[l] = -((c * mi[l] + sn * mj[l]) * (c * ui[l] + sn * uj[l])).imag();
        }
      }
    });

    rows.clear();
    for (const auto& a : slots) {
      rows.push_back(a.slot);
      rows.push_back(half + a.slot);
    }
    pool.parallel_for(rows.size(), [&](std::size_t lo, std::size_t hi) {
      for (std::size_t k = lo; k < hi; ++k)
        ws.d_vec[rows[k]] = pairwise_sum<double>(ws.a_mat.row(rows[k]));
    });

    for (const auto& a : slots) {
      result.d_theta[a.flat] = ws.d_vec[a.slot];
      result.d_phi[a.flat] = ws.d_vec[half + a.slot];
    }
  }
  return result;
}

}  // namespace rrgivens
