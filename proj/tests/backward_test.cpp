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

#include <gtest/gtest.h>

#include <random>

#include "rrgivens/errors.hpp"
#include "rrgivens/oracles.hpp"
#include "test_util.hpp"

namespace rrgivens {
namespace {

struct Problem {
  RotationSchedule schedule;
  AngleSet theta;
  Matrix u;
  Matrix gamma;
};

Problem make_problem(std::size_t n, std::mt19937_64& rng, std::optional<std::size_t> m = {}) {
  auto s = build_circle_schedule(n, std::nullopt, m);
  auto theta = testing::random_angles(s.active_count(), rng);
  Matrix u = forward_parallel(s, theta);
  Matrix gamma = testing::random_matrix(n, n, rng);
  return {std::move(s), std::move(theta), std::move(u), std::move(gamma)};
}

TEST(BackwardTest, ZeroCotangentGivesZeroGradient) {
  std::mt19937_64 rng(201);
  auto p = make_problem(7, rng);
  const auto g = jvp_parallel(p.schedule, p.theta, p.u, Matrix(7, 7));
  for (double d : g.d_theta) EXPECT_EQ(d, 0.0);
}

TEST(BackwardTest, TwoByTwoHandValue) {
  const auto s = build_circle_schedule(2);
  const AngleSet theta{{0.0}};
  Matrix gamma(2, 2);
  gamma(1, 0) = 1.0;
  const auto g = jvp_parallel(s, theta, forward_parallel(s, theta), gamma);
  ASSERT_EQ(g.d_theta.size(), 1u);
  EXPECT_DOUBLE_EQ(g.d_theta[0], 1.0);
}

TEST(BackwardTest, MatchesExplicitJacobian) {
  std::mt19937_64 rng(203);
  for (std::size_t n : {2u, 3u, 4u, 5u, 6u, 8u}) {
    for (int trial = 0; trial < 5; ++trial) {
      auto p = make_problem(n, rng);
      const auto g = jvp_parallel(p.schedule, p.theta, p.u, p.gamma);
      const auto ref = oracles::jacobian_contraction(p.schedule, p.theta, p.gamma);
      EXPECT_LT(testing::max_abs_diff(g.d_theta, ref), 1e-10) << "n=" << n;
    }
  }
}

TEST(BackwardTest, MatchesDoublePrecisionFiniteDifferences) {
  std::mt19937_64 rng(205);
  for (std::size_t n : {4u, 6u, 9u, 16u}) {
    auto p = make_problem(n, rng);
    const auto g = jvp_parallel(p.schedule, p.theta, p.u, p.gamma);
    const auto fd = oracles::finite_diff_gradient(p.schedule, p.theta, oracles::linear_loss(p.gamma));
    EXPECT_LT(testing::max_relative_error(g.d_theta, fd.d_theta), 1e-6) << "n=" << n;
  }
}

TEST(BackwardTest, MatchesExtendedPrecisionFiniteDifferencesAt64) {
  std::mt19937_64 rng(207);
  auto p = make_problem(64, rng);
  const auto g = jvp_parallel(p.schedule, p.theta, p.u, p.gamma);
  const auto fd = oracles::finite_diff_linear_gradient(p.schedule, p.theta, p.gamma,
                                                       oracles::kDefaultStep, {},
                                                       oracles::FdPrecision::kExtended);
  EXPECT_LT(testing::max_relative_error(g.d_theta, fd.d_theta), 1e-6);
}

TEST(BackwardTest, RestrictedGradientHasOneEntryPerActivePair) {
  std::mt19937_64 rng(209);
  auto p = make_problem(8, rng, 4);
  const auto g = jvp_parallel(p.schedule, p.theta, p.u, p.gamma);
  ASSERT_EQ(g.d_theta.size(), 22u);
  const auto ref = oracles::jacobian_contraction(p.schedule, p.theta, p.gamma);
  EXPECT_LT(testing::max_abs_diff(g.d_theta, ref), 1e-10);
  const auto fd = oracles::finite_diff_gradient(p.schedule, p.theta, oracles::linear_loss(p.gamma));
  EXPECT_LT(testing::max_relative_error(g.d_theta, fd.d_theta), 1e-6);
}

TEST(BackwardTest, ReflectedParametrisation) {
  std::mt19937_64 rng(211);
  const auto s = build_circle_schedule(6);
  const auto theta = testing::random_angles(15, rng);
  const OrthogonalConfig cfg{true, 3};
  const Matrix u = forward_parallel(s, theta, cfg);
  const Matrix gamma = testing::random_matrix(6, 6, rng);
  const auto g = jvp_with_reflection(s, theta, u, gamma, cfg);
  EXPECT_TRUE(g.diagnostics.empty());
  const auto fd = oracles::finite_diff_gradient(s, theta, oracles::linear_loss(gamma),
                                                oracles::kDefaultStep, cfg);
  EXPECT_LT(testing::max_relative_error(g.d_theta, fd.d_theta), 1e-6);

  const auto passthrough = jvp_with_reflection(s, theta, forward_parallel(s, theta), gamma, {});
  EXPECT_TRUE(testing::bitwise_equal(passthrough.d_theta,
                                     jvp_parallel(s, theta, forward_parallel(s, theta), gamma).d_theta));
}

TEST(BackwardTest, LinearInCotangent) {
  std::mt19937_64 rng(213);
  auto p = make_problem(12, rng);
  const Matrix g2 = testing::random_matrix(12, 12, rng);
  const double a = 0.75;
  const double b = -2.5;
  Matrix mix(12, 12);
  for (std::size_t r = 0; r < 12; ++r)
    for (std::size_t c = 0; c < 12; ++c) mix(r, c) = a * p.gamma(r, c) + b * g2(r, c);
  const auto d1 = jvp_parallel(p.schedule, p.theta, p.u, p.gamma).d_theta;
  const auto d2 = jvp_parallel(p.schedule, p.theta, p.u, g2).d_theta;
  const auto dm = jvp_parallel(p.schedule, p.theta, p.u, mix).d_theta;
  for (std::size_t k = 0; k < dm.size(); ++k) EXPECT_NEAR(dm[k], a * d1[k] + b * d2[k], 1e-12);
}

TEST(BackwardTest, WorkerCountDoesNotChangeBits) {
  std::mt19937_64 rng(215);
  auto p = make_problem(40, rng);
  const auto ref = jvp_parallel(p.schedule, p.theta, p.u, p.gamma).d_theta;
  for (std::size_t w : {2u, 3u, 8u}) {
    WorkerPool pool(w);
    EXPECT_TRUE(testing::bitwise_equal(ref, jvp_parallel(p.schedule, p.theta, p.u, p.gamma, pool).d_theta));
  }
}

TEST(BackwardTest, WorkspaceRecursionInvariant) {
  std::mt19937_64 rng(217);
  auto p = make_problem(6, rng);
  const auto& s = p.schedule;
  BackwardWorkspace<double> ws;
  std::size_t calls = 0;
  std::size_t last = s.num_blocks();
  const BlockObserver<double> observer = [&](std::size_t b, const BackwardWorkspace<double>& w) {
    ++calls;
    EXPECT_EQ(b + 1, last);
    last = b;
    std::vector<CoordinatePair> tail;
    AngleSet tail_theta;
    for (std::size_t k = b; k < s.num_blocks(); ++k)
      for (const auto& a : s.active_slots(k)) {
        tail.push_back(a.pair);
        tail_theta.values.push_back(p.theta.values[a.flat]);
      }
    const Matrix u_bck = oracles::forward_sequential(6, tail, tail_theta);
    const Matrix u_fwd = w.u_fwd_t.transposed();
    EXPECT_LT(testing::max_abs_diff(oracles::multiply(u_fwd, u_bck), p.u), 1e-13) << "block " << b;
    EXPECT_LT(testing::max_abs_diff(w.m_mat, oracles::multiply(u_bck, p.gamma.transposed())),
              1e-13)
        << "block " << b;
    if (b == 0) EXPECT_LT(testing::max_abs_diff(u_fwd, Matrix::identity(6)), 1e-14);
  };
  WorkerPool pool(1);
  jvp_parallel(s, p.theta, p.u, p.gamma, pool, ws, observer);
  EXPECT_EQ(calls, s.num_blocks());
}

TEST(BackwardTest, JacobianColumnsHaveRankTwo) {
  std::mt19937_64 rng(219);
  const auto s = build_circle_schedule(8);
  const auto theta = testing::random_angles(s.active_count(), rng);
  for (const auto& e : s.index_map().pairs())
    EXPECT_EQ(testing::svd_rank(oracles::jacobian_column(s, theta, e).matrix), 2);
}

TEST(BackwardTest, StaleMatrixTriggersDiagnostic) {
  std::mt19937_64 rng(221);
  auto p = make_problem(10, rng);
  EXPECT_TRUE(jvp_parallel(p.schedule, p.theta, p.u, p.gamma).diagnostics.empty());
  Matrix stale = p.u;
  for (std::size_t r = 0; r < 10; ++r) stale(r, 0) *= 1.01;
  const auto g = jvp_parallel(p.schedule, p.theta, stale, p.gamma);
  ASSERT_EQ(g.diagnostics.size(), 1u);
  EXPECT_NE(g.diagnostics[0].find("orthogonality"), std::string::npos);
}

TEST(BackwardTest, RejectsMismatchedShapes) {
  std::mt19937_64 rng(223);
  auto p = make_problem(5, rng);
  EXPECT_THROW(jvp_parallel(p.schedule, p.theta, Matrix::identity(4), p.gamma), ParameterError);
  EXPECT_THROW(jvp_parallel(p.schedule, p.theta, p.u, Matrix(5, 4)), ParameterError);
  EXPECT_THROW(jvp_parallel(p.schedule, AngleSet{{0.1}}, p.u, p.gamma), ParameterError);
}

TEST(BackwardFloatTest, AgreesWithDoublePrecision) {
  std::mt19937_64 rng(225);
  auto p = make_problem(32, rng);
  AngleSetF tf;
  for (double t : p.theta.values) tf.values.push_back(static_cast<float>(t));
  const MatrixF uf = forward_parallel(p.schedule, tf);
  MatrixF gf(32, 32);
  for (std::size_t r = 0; r < 32; ++r)
    for (std::size_t c = 0; c < 32; ++c) gf(r, c) = static_cast<float>(p.gamma(r, c));
  const auto df = jvp_parallel(p.schedule, tf, uf, gf);
  EXPECT_TRUE(df.diagnostics.empty());
  const auto dd = jvp_parallel(p.schedule, p.theta, p.u, p.gamma).d_theta;
  for (std::size_t k = 0; k < dd.size(); ++k) EXPECT_NEAR(df.d_theta[k], dd[k], 2e-3);
}

}  // namespace
}  // namespace rrgivens
