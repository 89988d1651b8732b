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

#ifndef RRGIVENS_KERNELS_HPP_
#define RRGIVENS_KERNELS_HPP_

// In-place Givens rotation primitives on dense row-major matrices.
//
// Every kernel touches only the two rows (or columns) named by its pair, so
// calls on disjoint pairs may run concurrently on the same matrix. The
// arithmetic in each element update is written out in a fixed order; the
// sequential reference in oracles.cpp repeats the same expressions, and
// the two are compared bit for bit.

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>

#include "rrgivens/dense_matrix.hpp"
#include "rrgivens/errors.hpp"

namespace rrgivens {

// cos/sin of one rotation angle, computed once and shared by every kernel
// touching that pair.
template <typename T>
struct RotationParams {
  T cos_theta = T{1};
  T sin_theta = T{0};

  static RotationParams from_angle(T theta) { return {std::cos(theta), std::sin(theta)}; }
};

// Rotation with a phase on the i-th column of the Givens block:
//   G_ii = e^{i phi} cos, G_ij = -sin, G_ji = e^{i phi} sin, G_jj = cos.
struct PhaseRotationParams {
  double cos_theta = 1.0;
  double sin_theta = 0.0;
  std::complex<double> phase{1.0, 0.0};

  static PhaseRotationParams from_angles(double theta, double phi) {
    return {std::cos(theta), std::sin(theta), std::polar(1.0, phi)};
  }
  std::complex<double> phase_cos() const { return phase * cos_theta; }
  std::complex<double> phase_sin() const { return phase * sin_theta; }
};

namespace detail {

inline void check_pair(std::size_t i, std::size_t j, std::size_t extent, const char* what) {
  if (i == j || i >= extent || j >= extent) {
    throw ParameterError(std::string(what) + ": invalid index pair (" + std::to_string(i) + ", " +
                         std::to_string(j) + ") for extent " + std::to_string(extent));
  }
}

template <typename T>
inline void rotate_row_pair(T* ri, T* rj, std::size_t len, T c, T s) {
  for (std::size_t k = 0; k < len; ++k) {
    const T a = ri[k];
    const T b = rj[k];
    ri[k] = c * a - s * b;
    rj[k] = s * a + c * b;
  }
}

inline void rotate_row_pair(std::complex<double>* ri, std::complex<double>* rj, std::size_t len,
                            std::complex<double> pc, std::complex<double> ps, double c, double s) {
  for (std::size_t k = 0; k < len; ++k) {
    const std::complex<double> a = ri[k];
    const std::complex<double> b = rj[k];
    ri[k] = pc * a - s * b;
    rj[k] = ps * a + c * b;
  }
}

}  // namespace detail

// Left-multiplies by G^e: row i <- c*row_i - s*row_j, row j <- s*row_i + c*row_j.
template <typename T>
void rotate_rows(DenseMatrix<T>& mat, std::size_t i, std::size_t j, const RotationParams<T>& p) {
  detail::check_pair(i, j, mat.rows(), "rotate_rows");
  detail::rotate_row_pair(mat.row(i).data(), mat.row(j).data(), mat.cols(), p.cos_theta,
                          p.sin_theta);
}

inline void rotate_rows(ComplexMatrix& mat, std::size_t i, std::size_t j,
                        const PhaseRotationParams& p) {
  detail::check_pair(i, j, mat.rows(), "rotate_rows");
  detail::rotate_row_pair(mat.row(i).data(), mat.row(j).data(), mat.cols(), p.phase_cos(),
                          p.phase_sin(), p.cos_theta, p.sin_theta);
}

// Right-multiplies by the adjoint of G^e, undoing a rotate_rows with the
// same arguments applied from the left:
//   col i <- c*col_i - s*col_j, col j <- s*col_i + c*col_j  (real)
//   col i <- conj(e^{i phi})c*col_i - s*col_j,
//   col j <- conj(e^{i phi})s*col_i + c*col_j              (complex)
template <typename T>
void rotate_cols_inverse(DenseMatrix<T>& mat, std::size_t i, std::size_t j,
                         const RotationParams<T>& p) {
  detail::check_pair(i, j, mat.cols(), "rotate_cols_inverse");
  const T c = p.cos_theta;
  const T s = p.sin_theta;
  for (std::size_t r = 0; r < mat.rows(); ++r) {
    T* row = mat.row(r).data();
    const T a = row[i];
    const T b = row[j];
    row[i] = c * a - s * b;
    row[j] = s * a + c * b;
  }
}

inline void rotate_cols_inverse(ComplexMatrix& mat, std::size_t i, std::size_t j,
                                const PhaseRotationParams& p) {
  detail::check_pair(i, j, mat.cols(), "rotate_cols_inverse");
  const std::complex<double> pc = std::conj(p.phase_cos());
  const std::complex<double> ps = std::conj(p.phase_sin());
  const double c = p.cos_theta;
  const double s = p.sin_theta;
  for (std::size_t r = 0; r < mat.rows(); ++r) {
    std::complex<double>* row = mat.row(r).data();
    const std::complex<double> a = row[i];
    const std::complex<double> b = row[j];
    row[i] = pc * a - s * b;
    row[j] = ps * a + c * b;
  }
}

// A rotation bound to its coordinate pair, as consumed by the block loops.
template <typename Params>
struct BoundRotation {
  std::size_t i;
  std::size_t j;
  Params params;
};

}  // namespace rrgivens

#endif  // RRGIVENS_KERNELS_HPP_
