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

#include "rrgivens/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <utility>

#include "rrgivens/errors.hpp"

namespace rrgivens::oracles {

namespace {

using cdouble = std::complex<double>;

void check_pairs(std::size_t n, std::span<const CoordinatePair> pairs, std::size_t count) {
  if (pairs.size() != count) {
    throw ParameterError("forward_sequential: " + std::to_string(pairs.size()) + " pairs but " +
                         std::to_string(count) + " angles");
  }
  for (const auto& p : pairs) {
    if (!(p.i < p.j) || p.j >= n) {
      throw ParameterError("forward_sequential: pair (" + std::to_string(p.i) + ", " +
                           std::to_string(p.j) + ") invalid for n = " + std::to_string(n));
    }
  }
}

template <typename M>
M product_of(const std::vector<M>& factors, std::size_t begin, std::size_t end, std::size_t n) {
  M acc = M::identity(n);
  for (std::size_t k = begin; k < end; ++k) acc = multiply(acc, factors[k]);
  return acc;
}

// Dense G^{b} for every block, real case.
std::vector<Matrix> dense_blocks(const RotationSchedule& s, const AngleSet& theta) {
  std::vector<Matrix> out;
  for (std::size_t b = 0; b < s.num_blocks(); ++b) {
    Matrix g = Matrix::identity(s.n());
    for (const auto& a : s.active_slots(b))
      g = multiply(g, givens_matrix(s.n(), a.pair, theta.values[a.flat]));
    out.push_back(std::move(g));
  }
  return out;
}

std::vector<ComplexMatrix> dense_blocks(const RotationSchedule& s, const AngleSet& theta,
                                        const PhaseSet& phi) {
  std::vector<ComplexMatrix> out;
  for (std::size_t b = 0; b < s.num_blocks(); ++b) {
    ComplexMatrix g = ComplexMatrix::identity(s.n());
    for (const auto& a : s.active_slots(b)) {
      g = multiply(g, givens_matrix_unitary(s.n(), a.pair, theta.values[a.flat],
                                            phi.values[a.flat]));
    }
    out.push_back(std::move(g));
  }
  return out;
}

PairLocation locate_active(const RotationSchedule& s, CoordinatePair e) {
  auto loc = s.index_map().lookup(e);
  if (!loc) {
    throw ParameterError("jacobian_column: pair (" + std::to_string(e.i) + ", " +
                         std::to_string(e.j) + ") is not an active pair of the schedule");
  }
  return *loc;
}

void check_lengths(const RotationSchedule& s, const AngleSet& theta, const PhaseSet* phi) {
  detail::check_angle_count(s, theta.size(), "oracle");
  if (phi && phi->size() != theta.size()) throw ParameterError("oracle: phase count mismatch");
}

}  // namespace

namespace {

template <typename R>
DenseMatrix<R> sequential(std::size_t n, std::span<const CoordinatePair> pairs,
                          std::span<const R> theta, const OrthogonalConfig& cfg) {
  check_pairs(n, pairs, theta.size());
  auto u = DenseMatrix<R>::identity(n);
  for (std::size_t k = pairs.size(); k-- > 0;) {
    const auto [i, j] = pairs[k];
    const R c = std::cos(theta[k]);
    const R s = std::sin(theta[k]);
    for (std::size_t col = 0; col < n; ++col) {
      const R a = u(i, col);
      const R b = u(j, col);
      u(i, col) = c * a - s * b;
      u(j, col) = s * a + c * b;
    }
  }
  if (cfg.reflect) {
    if (cfg.reflect_column >= n) throw ParameterError("reflect column out of range");
    for (std::size_t r = 0; r < n; ++r) u(r, cfg.reflect_column) = -u(r, cfg.reflect_column);
  }
  return u;
}

template <typename R>
DenseMatrix<std::complex<R>> sequential_unitary(std::size_t n,
                                                std::span<const CoordinatePair> pairs,
                                                std::span<const R> theta,
                                                std::span<const R> phi) {
  check_pairs(n, pairs, theta.size());
  if (phi.size() != theta.size()) throw ParameterError("forward_sequential_unitary: phase count");
  using C = std::complex<R>;
  auto u = DenseMatrix<C>::identity(n);
  for (std::size_t k = pairs.size(); k-- > 0;) {
    const auto [i, j] = pairs[k];
    const R c = std::cos(theta[k]);
    const R s = std::sin(theta[k]);
    const C phase = std::polar(R{1}, phi[k]);
    const C pc = phase * c;
    const C ps = phase * s;
    for (std::size_t col = 0; col < n; ++col) {
      const C a = u(i, col);
      const C b = u(j, col);
      u(i, col) = pc * a - s * b;
      u(j, col) = ps * a + c * b;
    }
  }
  return u;
}

}  // namespace

Matrix forward_sequential(std::size_t n, std::span<const CoordinatePair> pairs,
                          const AngleSet& theta, const OrthogonalConfig& cfg) {
  return sequential<double>(n, pairs, theta.values, cfg);
}

Matrix forward_sequential(const RotationSchedule& s, const AngleSet& theta,
                          const OrthogonalConfig& cfg) {
  const auto pairs = s.flattened_active_pairs();
  return forward_sequential(s.n(), pairs, theta, cfg);
}

ComplexMatrix forward_sequential_unitary(std::size_t n, std::span<const CoordinatePair> pairs,
                                         const AngleSet& theta, const PhaseSet& phi) {
  return sequential_unitary<double>(n, pairs, theta.values, phi.values);
}

ComplexMatrix forward_sequential_unitary(const RotationSchedule& s, const AngleSet& theta,
                                         const PhaseSet& phi) {
  const auto pairs = s.flattened_active_pairs();
  return forward_sequential_unitary(s.n(), pairs, theta, phi);
}

Matrix givens_matrix(std::size_t n, CoordinatePair e, double theta) {
  Matrix g = Matrix::identity(n);
  g(e.i, e.i) = std::cos(theta);
  g(e.j, e.j) = std::cos(theta);
  g(e.i, e.j) = -std::sin(theta);
  g(e.j, e.i) = std::sin(theta);
  return g;
}

Matrix givens_derivative(std::size_t n, CoordinatePair e, double theta) {
  Matrix g(n, n);
  g(e.i, e.i) = -std::sin(theta);
  g(e.j, e.j) = -std::sin(theta);
  g(e.i, e.j) = -std::cos(theta);
  g(e.j, e.i) = std::cos(theta);
  return g;
}

Matrix q_matrix(std::size_t n, CoordinatePair e) {
  Matrix q(n, n);
  q(e.i, e.j) = -1.0;
  q(e.j, e.i) = 1.0;
  return q;
}

ComplexMatrix givens_matrix_unitary(std::size_t n, CoordinatePair e, double theta, double phi) {
  const cdouble phase = std::polar(1.0, phi);
  ComplexMatrix g = ComplexMatrix::identity(n);
  g(e.i, e.i) = phase * std::cos(theta);
  g(e.j, e.j) = std::cos(theta);
  g(e.i, e.j) = -std::sin(theta);
  g(e.j, e.i) = phase * std::sin(theta);
  return g;
}

ComplexMatrix givens_derivative_theta_unitary(std::size_t n, CoordinatePair e, double theta,
                                              double phi) {
  const cdouble phase = std::polar(1.0, phi);
  ComplexMatrix g(n, n);
  g(e.i, e.i) = -phase * std::sin(theta);
  g(e.j, e.j) = -std::sin(theta);
  g(e.i, e.j) = -std::cos(theta);
  g(e.j, e.i) = phase * std::cos(theta);
  return g;
}

ComplexMatrix givens_derivative_phi_unitary(std::size_t n, CoordinatePair e, double theta,
                                            double phi) {
  const cdouble iphase = cdouble{0.0, 1.0} * std::polar(1.0, phi);
  ComplexMatrix g(n, n);
  g(e.i, e.i) = iphase * std::cos(theta);
  g(e.j, e.i) = iphase * std::sin(theta);
  return g;
}

ComplexMatrix p_matrix(std::size_t n, CoordinatePair e, double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  ComplexMatrix p(n, n);
  p(e.i, e.i) = {0.0, c * c};
  p(e.j, e.j) = {0.0, s * s};
  p(e.i, e.j) = {0.0, s * c};
  p(e.j, e.i) = {0.0, s * c};
  return p;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw ParameterError("multiply: inner dimension mismatch");
  Matrix out(a.rows(), b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < b.cols(); ++c) {
      double acc = 0.0;
      for (std::size_t k = 0; k < a.cols(); ++k) acc += a(r, k) * b(k, c);
      out(r, c) = acc;
    }
  return out;
}

ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw ParameterError("multiply: inner dimension mismatch");
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < b.cols(); ++c) {
      cdouble acc{};
      for (std::size_t k = 0; k < a.cols(); ++k) acc += a(r, k) * b(k, c);
      out(r, c) = acc;
    }
  return out;
}

ComplexMatrix adjoint(const ComplexMatrix& a) {
  ComplexMatrix out(a.cols(), a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) out(c, r) = std::conj(a(r, c));
  return out;
}

JacobianColumn jacobian_column(const RotationSchedule& s, const AngleSet& theta,
                               CoordinatePair e) {
  check_lengths(s, theta, nullptr);
  const PairLocation loc = locate_active(s, e);
  const auto blocks = dense_blocks(s, theta);
  const Matrix prefix = product_of(blocks, 0, loc.block, s.n());
  const Matrix suffix = product_of(blocks, loc.block, blocks.size(), s.n());
  return {e, multiply(multiply(prefix, q_matrix(s.n(), e)), suffix)};
}

UnitaryJacobianColumn jacobian_column_unitary(const RotationSchedule& s, const AngleSet& theta,
                                              const PhaseSet& phi, CoordinatePair e) {
  check_lengths(s, theta, &phi);
  const PairLocation loc = locate_active(s, e);
  const auto blocks = dense_blocks(s, theta, phi);
  const ComplexMatrix prefix = product_of(blocks, 0, loc.block, s.n());
  const ComplexMatrix suffix = product_of(blocks, loc.block, blocks.size(), s.n());
  ComplexMatrix q(s.n(), s.n());
  q(e.i, e.j) = -1.0;
  q(e.j, e.i) = 1.0;
  const ComplexMatrix p = p_matrix(s.n(), e, theta.values[loc.flat]);
  return {e, multiply(multiply(prefix, q), suffix), multiply(multiply(prefix, p), suffix)};
}

std::vector<double> jacobian_contraction(const RotationSchedule& s, const AngleSet& theta,
                                         const Matrix& gamma) {
  check_lengths(s, theta, nullptr);
  const std::size_t n = s.n();
  if (gamma.rows() != n || gamma.cols() != n) throw ParameterError("gamma must be n x n");
  const auto blocks = dense_blocks(s, theta);
  std::vector<double> out(theta.size());
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const Matrix prefix = product_of(blocks, 0, b, n);
    const Matrix suffix = product_of(blocks, b, blocks.size(), n);
    for (const auto& a : s.active_slots(b)) {
      const Matrix col = multiply(multiply(prefix, q_matrix(n, a.pair)), suffix);
      double acc = 0.0;
      for (std::size_t k = 0; k < n * n; ++k) acc += gamma.data()[k] * col.data()[k];
      out[a.flat] = acc;
    }
  }
  return out;
}

ComplexGradientResult jacobian_contraction_unitary(const RotationSchedule& s,
                                                   const AngleSet& theta, const PhaseSet& phi,
                                                   const ComplexMatrix& gamma) {
  check_lengths(s, theta, &phi);
  const std::size_t n = s.n();
  if (gamma.rows() != n || gamma.cols() != n) throw ParameterError("gamma must be n x n");
  const auto blocks = dense_blocks(s, theta, phi);
  ComplexGradientResult out;
  out.d_theta.resize(theta.size());
  out.d_phi.resize(theta.size());
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const ComplexMatrix prefix = product_of(blocks, 0, b, n);
    const ComplexMatrix suffix = product_of(blocks, b, blocks.size(), n);
    for (const auto& a : s.active_slots(b)) {
      ComplexMatrix q(n, n);
      q(a.pair.i, a.pair.j) = -1.0;
      q(a.pair.j, a.pair.i) = 1.0;
      const ComplexMatrix dt = multiply(multiply(prefix, q), suffix);
      const ComplexMatrix dp =
          multiply(multiply(prefix, p_matrix(n, a.pair, theta.values[a.flat])), suffix);
      double acc_t = 0.0;
      double acc_p = 0.0;
      for (std::size_t k = 0; k < n * n; ++k) {
        acc_t += (std::conj(gamma.data()[k]) * dt.data()[k]).real();
        acc_p += (std::conj(gamma.data()[k]) * dp.data()[k]).real();
      }
      out.d_theta[a.flat] = acc_t;
      out.d_phi[a.flat] = acc_p;
    }
  }
  return out;
}

RealLoss linear_loss(Matrix gamma) {
  return [g = std::move(gamma)](const Matrix& u) {
    if (u.rows() != g.rows() || u.cols() != g.cols()) throw ParameterError("loss shape mismatch");
    double acc = 0.0;
    for (std::size_t k = 0; k < u.data().size(); ++k) acc += g.data()[k] * u.data()[k];
    return acc;
  };
}

ComplexLoss linear_loss(ComplexMatrix gamma) {
  return [g = std::move(gamma)](const ComplexMatrix& u) {
    if (u.rows() != g.rows() || u.cols() != g.cols()) throw ParameterError("loss shape mismatch");
    double acc = 0.0;
    for (std::size_t k = 0; k < u.data().size(); ++k)
      acc += (std::conj(g.data()[k]) * u.data()[k]).real();
    return acc;
  };
}

GradientResult finite_diff_gradient(const RotationSchedule& s, const AngleSet& theta,
                                    const RealLoss& loss, double h, const OrthogonalConfig& cfg) {
  if (!(h > 0.0)) throw ParameterError("finite_diff_gradient: step must be positive");
  check_lengths(s, theta, nullptr);
  const auto pairs = s.flattened_active_pairs();
  GradientResult out;
  out.d_theta.resize(theta.size());
  AngleSet probe = theta;
  for (std::size_t f = 0; f < theta.size(); ++f) {
    probe.values[f] = theta.values[f] + h;
    const double up = loss(forward_sequential(s.n(), pairs, probe, cfg));
    probe.values[f] = theta.values[f] - h;
    const double down = loss(forward_sequential(s.n(), pairs, probe, cfg));
    probe.values[f] = theta.values[f];
    out.d_theta[f] = (up - down) / (2.0 * h);
  }
  return out;
}

ComplexGradientResult finite_diff_gradient_unitary(const RotationSchedule& s,
                                                   const AngleSet& theta, const PhaseSet& phi,
                                                   const ComplexLoss& loss, double h) {
  if (!(h > 0.0)) throw ParameterError("finite_diff_gradient_unitary: step must be positive");
  check_lengths(s, theta, &phi);
  const auto pairs = s.flattened_active_pairs();
  ComplexGradientResult out;
  out.d_theta.resize(theta.size());
  out.d_phi.resize(theta.size());
  AngleSet t = theta;
  PhaseSet p = phi;
  for (std::size_t f = 0; f < theta.size(); ++f) {
    t.values[f] = theta.values[f] + h;
    const double tu = loss(forward_sequential_unitary(s.n(), pairs, t, p));
    t.values[f] = theta.values[f] - h;
    const double td = loss(forward_sequential_unitary(s.n(), pairs, t, p));
    t.values[f] = theta.values[f];
    out.d_theta[f] = (tu - td) / (2.0 * h);

    p.values[f] = phi.values[f] + h;
    const double pu = loss(forward_sequential_unitary(s.n(), pairs, t, p));
    p.values[f] = phi.values[f] - h;
    const double pd = loss(forward_sequential_unitary(s.n(), pairs, t, p));
    p.values[f] = phi.values[f];
    out.d_phi[f] = (pu - pd) / (2.0 * h);
  }
  return out;
}

namespace {

template <typename R>
GradientResult linear_fd(const RotationSchedule& s, const AngleSet& theta, const Matrix& gamma,
                         double h, const OrthogonalConfig& cfg) {
  const auto pairs = s.flattened_active_pairs();
  const std::vector<R> base(theta.values.begin(), theta.values.end());
  std::vector<R> probe = base;
  auto loss = [&](const DenseMatrix<R>& u) {
    R acc{};
    for (std::size_t k = 0; k < u.data().size(); ++k) acc += R(gamma.data()[k]) * u.data()[k];
    return acc;
  };
  const R step = h;
  GradientResult out;
  out.d_theta.resize(theta.size());
  for (std::size_t f = 0; f < theta.size(); ++f) {
    probe[f] = base[f] + step;
    const R up = loss(sequential<R>(s.n(), pairs, probe, cfg));
    probe[f] = base[f] - step;
    const R down = loss(sequential<R>(s.n(), pairs, probe, cfg));
    probe[f] = base[f];
    out.d_theta[f] = static_cast<double>((up - down) / (2 * step));
  }
  return out;
}

template <typename R>
ComplexGradientResult linear_fd_unitary(const RotationSchedule& s, const AngleSet& theta,
                                        const PhaseSet& phi, const ComplexMatrix& gamma,
                                        double h) {
  using C = std::complex<R>;
  const auto pairs = s.flattened_active_pairs();
  const std::vector<R> t0(theta.values.begin(), theta.values.end());
  const std::vector<R> p0(phi.values.begin(), phi.values.end());
  std::vector<R> t = t0;
  std::vector<R> p = p0;
  auto loss = [&](const DenseMatrix<C>& u) {
    R acc{};
    for (std::size_t k = 0; k < u.data().size(); ++k) {
      const C g(gamma.data()[k].real(), gamma.data()[k].imag());
      acc += (std::conj(g) * u.data()[k]).real();
    }
    return acc;
  };
  auto eval = [&] { return loss(sequential_unitary<R>(s.n(), pairs, t, p)); };
  const R step = h;
  ComplexGradientResult out;
  out.d_theta.resize(theta.size());
  out.d_phi.resize(theta.size());
  for (std::size_t f = 0; f < theta.size(); ++f) {
    t[f] = t0[f] + step;
    const R tu = eval();
    t[f] = t0[f] - step;
    const R td = eval();
    t[f] = t0[f];
    out.d_theta[f] = static_cast<double>((tu - td) / (2 * step));

    p[f] = p0[f] + step;
    const R pu = eval();
    p[f] = p0[f] - step;
    const R pd = eval();
    p[f] = p0[f];
    out.d_phi[f] = static_cast<double>((pu - pd) / (2 * step));
  }
  return out;
}

}  // namespace

GradientResult finite_diff_linear_gradient(const RotationSchedule& s, const AngleSet& theta,
                                           const Matrix& gamma, double h,
                                           const OrthogonalConfig& cfg, FdPrecision precision) {
  if (!(h > 0.0)) throw ParameterError("finite_diff_linear_gradient: step must be positive");
  check_lengths(s, theta, nullptr);
  if (gamma.rows() != s.n() || gamma.cols() != s.n()) throw ParameterError("gamma must be n x n");
  return precision == FdPrecision::kExtended ? linear_fd<long double>(s, theta, gamma, h, cfg)
                                             : linear_fd<double>(s, theta, gamma, h, cfg);
}

ComplexGradientResult finite_diff_linear_gradient_unitary(const RotationSchedule& s,
                                                          const AngleSet& theta,
                                                          const PhaseSet& phi,
                                                          const ComplexMatrix& gamma, double h,
                                                          FdPrecision precision) {
  if (!(h > 0.0)) throw ParameterError("finite_diff_linear_gradient_unitary: step must be positive");
  check_lengths(s, theta, &phi);
  if (gamma.rows() != s.n() || gamma.cols() != s.n()) throw ParameterError("gamma must be n x n");
  return precision == FdPrecision::kExtended
             ? linear_fd_unitary<long double>(s, theta, phi, gamma, h)
             : linear_fd_unitary<double>(s, theta, phi, gamma, h);
}

double orthogonality_error(const Matrix& u) {
  const std::size_t n = u.cols();
  double worst = 0.0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a; b < n; ++b) {
      double acc = 0.0;
      for (std::size_t r = 0; r < u.rows(); ++r) acc += u(r, a) * u(r, b);
      worst = std::max(worst, std::abs(acc - (a == b ? 1.0 : 0.0)));
    }
  return worst;
}

namespace {

template <typename T>
std::size_t rank_full_pivot(DenseMatrix<T> a, double tol) {
  const std::size_t rows = a.rows();
  const std::size_t cols = a.cols();
  std::size_t rank = 0;
  double first_pivot = 0.0;
  for (std::size_t step = 0; step < std::min(rows, cols); ++step) {
    std::size_t pr = step, pc = step;
    double best = 0.0;
    for (std::size_t r = step; r < rows; ++r)
      for (std::size_t c = step; c < cols; ++c)
        if (std::abs(a(r, c)) > best) {
          best = std::abs(a(r, c));
          pr = r;
          pc = c;
        }
    if (step == 0) first_pivot = best;
    if (best == 0.0 || best <= tol * first_pivot) break;
    for (std::size_t c = 0; c < cols; ++c) std::swap(a(step, c), a(pr, c));
    for (std::size_t r = 0; r < rows; ++r) std::swap(a(r, step), a(r, pc));
    for (std::size_t r = step + 1; r < rows; ++r) {
      const T factor = a(r, step) / a(step, step);
      for (std::size_t c = step; c < cols; ++c) a(r, c) -= factor * a(step, c);
    }
    ++rank;
  }
  return rank;
}

}  // namespace

std::size_t numerical_rank(const Matrix& a, double tol) { return rank_full_pivot(a, tol); }
std::size_t numerical_rank(const ComplexMatrix& a, double tol) { return rank_full_pivot(a, tol); }

}  // namespace rrgivens::oracles
