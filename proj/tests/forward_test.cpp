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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "rrgivens/errors.hpp"
#include "rrgivens/oracles.hpp"
#include "test_util.hpp"

namespace rrgivens {
namespace {

TEST(ForwardTest, ZeroAnglesGiveIdentity) {
  for (std::size_t n : {2u, 5u, 8u}) {
    const auto s = build_circle_schedule(n);
    const AngleSet theta{std::vector<double>(s.active_count(), 0.0)};
    EXPECT_EQ(forward_parallel(s, theta), Matrix::identity(n));
  }
}

TEST(ForwardTest, TwoByTwoQuarterTurn) {
  const auto s = build_circle_schedule(2);
  const Matrix u = forward_parallel(s, AngleSet{{std::numbers::pi / 2}});
  EXPECT_NEAR(u(0, 0), 0.0, 1e-16);
  EXPECT_DOUBLE_EQ(u(0, 1), -1.0);
  EXPECT_DOUBLE_EQ(u(1, 0), 1.0);
  EXPECT_NEAR(u(1, 1), 0.0, 1e-16);
}

TEST(ForwardTest, BitwiseEqualToSequentialOracle) {
  std::mt19937_64 rng(101);
  for (std::size_t n : {2u, 3u, 6u, 7u, 16u, 33u, 64u}) {
    const auto s = build_circle_schedule(n, testing::random_permutation(n + n % 2, rng));
    const auto theta = testing::random_angles(s.active_count(), rng);
    EXPECT_TRUE(testing::bitwise_equal(forward_parallel(s, theta),
                                       oracles::forward_sequential(s, theta)))
        << "n=" << n;
  }
}

TEST(ForwardTest, WorkerCountDoesNotChangeBits) {
  std::mt19937_64 rng(103);
  const auto s = build_circle_schedule(48);
  const auto theta = testing::random_angles(s.active_count(), rng);
  const Matrix ref = forward_parallel(s, theta);
  for (std::size_t w : {2u, 4u, 7u}) {
    WorkerPool pool(w);
    EXPECT_TRUE(testing::bitwise_equal(ref, forward_parallel(s, theta, {}, pool))) << w;
  }
}

TEST(ForwardTest, ProducesSpecialOrthogonalMatrices) {
  std::mt19937_64 rng(107);
  for (std::size_t n : {4u, 9u, 16u, 64u, 256u, 512u}) {
    const auto s = build_circle_schedule(n);
    const Matrix u = forward_parallel(s, testing::random_angles(s.active_count(), rng));
    EXPECT_LT(testing::orthogonality_error_eigen(u), 1e-12) << "n=" << n;
    EXPECT_NEAR(testing::determinant(u), 1.0, 1e-10) << "n=" << n;
  }
}

TEST(ForwardTest, ReflectionNegatesChosenColumn) {
  const auto s = build_circle_schedule(4);
  const AngleSet zero{std::vector<double>(6, 0.0)};
  const Matrix u = forward_parallel(s, zero, OrthogonalConfig{true, 0});
  Matrix expected = Matrix::identity(4);
  expected(0, 0) = -1.0;
  EXPECT_EQ(u, expected);

  std::mt19937_64 rng(109);
  const auto theta = testing::random_angles(6, rng);
  const Matrix plain = forward_parallel(s, theta);
  const Matrix refl = forward_parallel(s, theta, OrthogonalConfig{true, 2});
  EXPECT_NEAR(testing::determinant(refl), -1.0, 1e-12);
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c) EXPECT_EQ(refl(r, c), c == 2 ? -plain(r, c) : plain(r, c));
  EXPECT_THROW(forward_parallel(s, theta, OrthogonalConfig{true, 4}), ParameterError);
}

TEST(ForwardTest, RejectsWrongAngleCount) {
  const auto s = build_circle_schedule(5);
  EXPECT_THROW(forward_parallel(s, AngleSet{std::vector<double>(9, 0.0)}), ParameterError);
  EXPECT_THROW(forward_parallel(s, AngleSet{std::vector<double>(15, 0.0)}), ParameterError);
}

TEST(ForwardRestrictedTest, FirstColumnsMatchSequentialProduct) {
  std::mt19937_64 rng(113);
  const auto s = build_circle_schedule(8, std::nullopt, 4);
  const auto theta = testing::random_angles(22, rng);
  const Matrix u = forward_restricted(s, theta);
  EXPECT_TRUE(testing::bitwise_equal(u, oracles::forward_sequential(s, theta)));
  EXPECT_LT(testing::orthogonality_error_eigen(u), 1e-13);
}

TEST(ForwardRestrictedTest, InactivePairsAreIdentityRotations) {
  std::mt19937_64 rng(127);
  const auto full = build_circle_schedule(8);
  const auto part = build_circle_schedule(8, std::nullopt, 4);
  const auto theta = testing::random_angles(22, rng);
  AngleSet padded{std::vector<double>(28, 0.0)};
  const auto& full_map = full.index_map();
  for (std::size_t f = 0; f < part.active_count(); ++f)
    padded.values[*full_map.flat_index(part.index_map().pair_at(f))] = theta.values[f];
  EXPECT_LT(testing::max_abs_diff(forward_restricted(part, theta), forward_parallel(full, padded)),
            1e-15);
}

TEST(ForwardRestrictedTest, SingleActiveRowIsSphereParametrisation) {
  std::mt19937_64 rng(131);
  const auto s = build_circle_schedule(10, std::nullopt, 1);
  EXPECT_EQ(s.active_count(), 9u);
  const Matrix u = forward_restricted(s, testing::random_angles(9, rng));
  EXPECT_LT(testing::orthogonality_error_eigen(u), 1e-13);
}

TEST(ForwardFloatTest, SinglePrecisionStaysNearOrthogonal) {
  std::mt19937_64 rng(137);
  const auto s = build_circle_schedule(64);
  const auto theta = testing::random_angles(s.active_count(), rng);
  AngleSetF tf;
  for (double t : theta.values) tf.values.push_back(static_cast<float>(t));
  const MatrixF uf = forward_parallel(s, tf);
  Matrix ud(64, 64);
  for (std::size_t r = 0; r < 64; ++r)
    for (std::size_t c = 0; c < 64; ++c) ud(r, c) = uf(r, c);
  EXPECT_LT(testing::orthogonality_error_eigen(ud), 1e-4);
  EXPECT_LT(testing::max_abs_diff(ud, forward_parallel(s, theta)), 1e-4);
}

}  // namespace
}  // namespace rrgivens
