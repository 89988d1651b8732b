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

#ifndef RRGIVENS_ORACLES_HPP_
#define RRGIVENS_ORACLES_HPP_

// Slow reference implementations used as ground truth by the tests and the
// `verify` command. Nothing here calls the fast kernels: the sequential
// forward repeats the row update inline, and Jacobians are formed from
// explicit dense Givens matrices with naive O(n^3) products.

#include <cstddef>
#include <functional>
#include <span>

#include "rrgivens/backward.hpp"
#include "rrgivens/dense_matrix.hpp"
#include "rrgivens/forward.hpp"
#include "rrgivens/schedule.hpp"
#include "rrgivens/unitary.hpp"

namespace rrgivens::oracles {

inline constexpr double kDefaultStep = 1e-6;

// Sequential forward over the pair sequence E (reversed iteration), one
// rotation at a time. theta[k] belongs to E[k].
Matrix forward_sequential(std::size_t n, std::span<const CoordinatePair> pairs,
                          const AngleSet& theta, const OrthogonalConfig& cfg = {});
Matrix forward_sequential(const RotationSchedule& s, const AngleSet& theta,
                          const OrthogonalConfig& cfg = {});

ComplexMatrix forward_sequential_unitary(std::size_t n, std::span<const CoordinatePair> pairs,
                                         const AngleSet& theta, const PhaseSet& phi);
ComplexMatrix forward_sequential_unitary(const RotationSchedule& s, const AngleSet& theta,
                                         const PhaseSet& phi);

// Dense building blocks.
Matrix givens_matrix(std::size_t n, CoordinatePair e, double theta);
Matrix givens_derivative(std::size_t n, CoordinatePair e, double theta);
Matrix q_matrix(std::size_t n, CoordinatePair e);
ComplexMatrix givens_matrix_unitary(std::size_t n, CoordinatePair e, double theta, double phi);
ComplexMatrix givens_derivative_theta_unitary(std::size_t n, CoordinatePair e, double theta,
                                              double phi);
ComplexMatrix givens_derivative_phi_unitary(std::size_t n, CoordinatePair e, double theta,
                                            double phi);
ComplexMatrix p_matrix(std::size_t n, CoordinatePair e, double theta);

Matrix multiply(const Matrix& a, const Matrix& b);
ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix adjoint(const ComplexMatrix& a);

struct JacobianColumn {
  CoordinatePair pair;
  Matrix matrix;  // dU/dtheta_e
};

struct UnitaryJacobianColumn {
  CoordinatePair pair;
  ComplexMatrix d_theta;
  ComplexMatrix d_phi;
};

// dU/dtheta_e = U^{1:k-1} Q_e U^{k:n-1} for e in block k. Throws
// ParameterError if e is not an active pair of s.
JacobianColumn jacobian_column(const RotationSchedule& s, const AngleSet& theta, CoordinatePair e);
UnitaryJacobianColumn jacobian_column_unitary(const RotationSchedule& s, const AngleSet& theta,
                                              const PhaseSet& phi, CoordinatePair e);

// sum_kl gamma_kl * dU_kl/dtheta_e for every active e, via the explicit
// Jacobian columns.
std::vector<double> jacobian_contraction(const RotationSchedule& s, const AngleSet& theta,
                                         const Matrix& gamma);
ComplexGradientResult jacobian_contraction_unitary(const RotationSchedule& s,
                                                   const AngleSet& theta, const PhaseSet& phi,
                                                   const ComplexMatrix& gamma);

using RealLoss = std::function<double(const Matrix&)>;
using ComplexLoss = std::function<double(const ComplexMatrix&)>;

// sum_kl gamma_kl U_kl
RealLoss linear_loss(Matrix gamma);
// sum_kl Re(conj(gamma_kl) U_kl)
ComplexLoss linear_loss(ComplexMatrix gamma);

// Central differences of loss(forward_sequential(s, theta, cfg)) over each
// active angle.
GradientResult finite_diff_gradient(const RotationSchedule& s, const AngleSet& theta,
                                    const RealLoss& loss, double h = kDefaultStep,
                                    const OrthogonalConfig& cfg = {});
ComplexGradientResult finite_diff_gradient_unitary(const RotationSchedule& s,
                                                   const AngleSet& theta, const PhaseSet& phi,
                                                   const ComplexLoss& loss,
                                                   double h = kDefaultStep);

// Arithmetic used to evaluate the perturbed forward passes of a finite
// difference. kDouble matches the library; kExtended runs the sequential
// forward and the loss accumulation in long double, which keeps the
// difference quotient's roundoff (~eps * |L| * sqrt(ops) / h) well below the
// truncation error for n in the tens.
enum class FdPrecision { kDouble, kExtended };

// Central differences of L = sum_kl gamma_kl U_kl (or, for the unitary
// variant, sum_kl Re(conj(gamma_kl) U_kl)).
GradientResult finite_diff_linear_gradient(const RotationSchedule& s, const AngleSet& theta,
                                           const Matrix& gamma, double h = kDefaultStep,
                                           const OrthogonalConfig& cfg = {},
                                           FdPrecision precision = FdPrecision::kDouble);
ComplexGradientResult finite_diff_linear_gradient_unitary(
    const RotationSchedule& s, const AngleSet& theta, const PhaseSet& phi,
    const ComplexMatrix& gamma, double h = kDefaultStep,
    FdPrecision precision = FdPrecision::kDouble);

// max |(U^T U - I)_kl|
double orthogonality_error(const Matrix& u);

// Singular-value-free rank estimate: Gaussian elimination with full pivoting,
// counting pivots above tol * largest pivot.
std::size_t numerical_rank(const Matrix& a, double tol = 1e-10);
std::size_t numerical_rank(const ComplexMatrix& a, double tol = 1e-10);

}  // namespace rrgivens::oracles

#endif  // RRGIVENS_ORACLES_HPP_
