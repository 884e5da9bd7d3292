// Copyright 2026 The kinosynth Authors
//
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

#include "kinosynth/geometry.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "kinosynth/errors.hpp"

namespace kinosynth {
namespace {

constexpr double kPi = 3.14159265358979323846;

TEST(AxisAngleRotationTest, ZeroAngleIsIdentity) {
  const RotationMatrix r = AxisAngleRotation(Vec3::UnitZ(), 0.0);
  EXPECT_TRUE(r.matrix().isApprox(Mat3::Identity(), 1e-15));
}

TEST(AxisAngleRotationTest, QuarterTurn) {
  const Vec3 v = AxisAngleRotation(Vec3::UnitZ(), kPi / 2) * Vec3::UnitX();
  EXPECT_NEAR((v - Vec3::UnitY()).norm(), 0.0, 1e-15);
}

TEST(AxisAngleRotationTest, InversePairComposesToIdentity) {
  const RotationMatrix a = AxisAngleRotation(Vec3::UnitX(), 0.7);
  const RotationMatrix b = AxisAngleRotation(Vec3::UnitX(), -0.7);
  EXPECT_LE(((a * b).matrix() - Mat3::Identity()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(AxisAngleRotationTest, RejectsNonUnitAxis) {
  try {
    AxisAngleRotation(Vec3(0, 0, 1.1), 1.0);
    FAIL() << "expected throw";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidInput);
  }
}

TEST(RotationMatrixTest, RebuildsThirdColumn) {
  const RotationMatrix r = RotationMatrix::FromColumns(Vec3::UnitY(), -Vec3::UnitX());
  EXPECT_NEAR((r.dz() - Vec3::UnitZ()).norm(), 0.0, 1e-15);
  EXPECT_NEAR(r.Yaw(), kPi / 2, 1e-15);
}

TEST(RotationMatrixTest, RejectsReflection) {
  Mat3 m = Mat3::Identity();
  m(2, 2) = -1.0;
  EXPECT_THROW(RotationMatrix::FromMatrix(m), Error);
}

TEST(ConfigFromPoseTest, Identity) {
  const PointConfiguration q = ConfigFromPose(Vec3::Zero(), RotationMatrix::Identity());
  EXPECT_EQ(q.p_o, Vec3(0, 0, 0));
  EXPECT_EQ(q.p_x, Vec3(1, 0, 0));
  EXPECT_EQ(q.p_y, Vec3(0, 1, 0));
}

TEST(ConfigFromPoseTest, QuarterTurnAtOneOne) {
  const PointConfiguration q =
      ConfigFromPose(Vec3(1, 1, 0), RotationMatrix::FromYaw(kPi / 2));
  EXPECT_NEAR((q.p_o - Vec3(1, 1, 0)).norm(), 0.0, 1e-15);
  EXPECT_NEAR((q.p_x - Vec3(1, 2, 0)).norm(), 0.0, 1e-15);
  EXPECT_NEAR((q.p_y - Vec3(0, 1, 0)).norm(), 0.0, 1e-15);
}

TEST(PoseFromConfigTest, RoundTrip) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const Vec3 p(n(rng), n(rng), n(rng));
    const RotationMatrix r =
        AxisAngleRotation(Vec3(n(rng), n(rng), n(rng)).normalized(), n(rng));
    const auto [p2, r2] = PoseFromConfig(ConfigFromPose(p, r));
    EXPECT_LE((p2 - p).norm(), 1e-12);
    EXPECT_LE((r2.matrix() - r.matrix()).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(PoseFromConfigTest, HandCheckedYaw) {
  PointConfiguration q;
  q.p_x = Vec3(0, 1, 0);
  q.p_y = Vec3(-1, 0, 0);
  const auto [p, r] = PoseFromConfig(q);
  EXPECT_EQ(p, Vec3::Zero());
  EXPECT_LE((r.matrix() - RotationMatrix::FromYaw(kPi / 2).matrix()).norm(), 1e-15);
}

TEST(PoseFromConfigTest, StretchedAxisIsDegenerate) {
  PointConfiguration q;
  q.p_x = Vec3(1.1, 0, 0);
  try {
    PoseFromConfig(q);
    FAIL() << "expected throw";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateConfiguration);
  }
}

TEST(PointErrorTest, SumOfThreeDistances) {
  const PointConfiguration a = PointConfiguration::Planar(0, 0, 0);
  const PointConfiguration b = PointConfiguration::Planar(1, 0, 0);
  EXPECT_DOUBLE_EQ(PointError(a, b), 3.0);
}

TEST(WrapTest, Ranges) {
  EXPECT_NEAR(WrapTwoPi(-0.5), 2 * kPi - 0.5, 1e-15);
  EXPECT_NEAR(WrapPi(3 * kPi / 2), -kPi / 2, 1e-15);
}

}  // namespace
}  // namespace kinosynth
