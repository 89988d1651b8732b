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

#ifndef RRGIVENS_TESTS_TEST_UTIL_HPP_
#define RRGIVENS_TESTS_TEST_UTIL_HPP_

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstring>
#include <numbers>
#include <random>
#include <vector>

#include "rrgivens/dense_matrix.hpp"
#include "rrgivens/forward.hpp"
#include "rrgivens/schedule.hpp"
#include "rrgivens/unitary.hpp"

namespace rrgivens::testing {

inline AngleSet random_angles(std::size_t count, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-std::numbers::pi, std::numbers::pi);
  AngleSet a;
  a.values.resize(count);
  for (auto& v : a.values) v = dist(rng);
  return a;
}

inline PhaseSet random_phases(std::size_t count, std::mt19937_64& rng) {
  return PhaseSet{random_angles(count, rng).values};
}

inline Matrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::normal_distribution<double> dist;
  Matrix m(rows, cols);
  for (auto& v : m.data()) v = dist(rng);
  return m;
}

inline ComplexMatrix random_complex_matrix(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> dist;
  ComplexMatrix m(n, n);
  for (auto& v : m.data()) v = {dist(rng), dist(rng)};
  return m;
}

inline std::vector<std::size_t> random_permutation(std::size_t n, std::mt19937_64& rng) {
  std::vector<std::size_t> p(n);
  for (std::size_t k = 0; k < n; ++k) p[k] = k;
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

template <typename T>
bool bitwise_equal(const DenseMatrix<T>& a, const DenseMatrix<T>& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         std::memcmp(a.data().data(), b.data().data(), a.data().size_bytes()) == 0;
}

template <typename T>
bool bitwise_equal(const std::vector<T>& a, const std::vector<T>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(T)) == 0;
}

template <typename T>
double max_abs_diff(const DenseMatrix<T>& a, const DenseMatrix<T>& b) {
  double worst = 0.0;
  for (std::size_t k = 0; k < a.data().size(); ++k)
    worst = std::max(worst, static_cast<double>(std::abs(a.data()[k] - b.data()[k])));
  return worst;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, std::abs(a[k] - b[k]));
  return worst;
}

// Largest |a - b| / |a| over components with |a| >= floor.
inline double max_relative_error(const std::vector<double>& a, const std::vector<double>& b,
                                 double floor = 1e-8) {
  double worst = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k)
    if (std::abs(a[k]) >= floor) worst = std::max(worst, std::abs(a[k] - b[k]) / std::abs(a[k]));
  return worst;
}

inline Eigen::MatrixXd to_eigen(const Matrix& m) {
  Eigen::MatrixXd e(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) e(r, c) = m(r, c);
  return e;
}

inline Eigen::MatrixXcd to_eigen(const ComplexMatrix& m) {
  Eigen::MatrixXcd e(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) e(r, c) = m(r, c);
  return e;
}

inline double determinant(const Matrix& m) { return to_eigen(m).partialPivLu().determinant(); }

inline double orthogonality_error_eigen(const Matrix& m) {
  const Eigen::MatrixXd u = to_eigen(m);
  const Eigen::MatrixXd g = u.transpose() * u - Eigen::MatrixXd::Identity(u.rows(), u.cols());
  return g.cwiseAbs().maxCoeff();
}

inline double unitarity_error_eigen(const ComplexMatrix& m) {
  const Eigen::MatrixXcd u = to_eigen(m);
  const Eigen::MatrixXcd g = u.adjoint() * u - Eigen::MatrixXcd::Identity(u.rows(), u.cols());
  return g.cwiseAbs().maxCoeff();
}

// Rank by SVD, relative threshold.
template <typename T>
Eigen::Index svd_rank(const DenseMatrix<T>& m, double rel_tol = 1e-10) {
  const auto e = to_eigen(m);
  Eigen::JacobiSVD<std::decay_t<decltype(e)>> svd(e);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  Eigen::Index r = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k)
    if (sv(k) > rel_tol * sv(0)) ++r;
  return r;
}

}  // namespace rrgivens::testing

#endif  // RRGIVENS_TESTS_TEST_UTIL_HPP_
