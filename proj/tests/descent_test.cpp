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

// The descent is experimental: it only moves k, so it cannot land on the
// measure-zero set of k that admit singular (straight) arcs.

#include <gtest/gtest.h>

#include "kinosynth/dubins.hpp"
#include "kinosynth/solver.hpp"
#include "kinosynth/switching.hpp"

namespace kinosynth {
namespace {

const ControlSet& Dubins() {
  static const ControlSet u = DubinsControlSet();
  return u;
}

TEST(ExperimentalDescentTest, SolvedCertificateIsAFixedPoint) {
  const Pose start = Pose::Planar(0.5, 0.4, -0.2);
  const SolveResult r = SolveShortest(start, Pose(), Dubins());
  const DescentResult d = ExperimentalDescent(ConfigFromPose(start), ConfigFromPose(Pose()),
                                              Dubins(), r.certificate);
  EXPECT_EQ(d.iterations, 0);
  EXPECT_TRUE(d.converged);
  EXPECT_NEAR(d.result.total_time, r.total_time, 1e-6);
}

TEST(ExperimentalDescentTest, StopsImmediatelyOnSwitchingCurve) {
  ExtremalCertificate c;
  c.k = Vec3(1, 1, 0);
  const DescentResult d = ExperimentalDescent(ConfigFromPose(Pose::Planar(1, 1, 0)),
                                              ConfigFromPose(Pose()), Dubins(), c);
  EXPECT_EQ(d.iterations, 0);
}

TEST(ExperimentalDescentTest, InteriorStartReachesRsr) {
  const Pose start = Pose::Planar(0.5, 0.4, -0.2);
  const auto cert = FeasibleK(start, Hypothesis{0, 2, 2}, Dubins(), Pose());
  ASSERT_TRUE(cert.has_value());
  const DescentResult d =
      ExperimentalDescent(ConfigFromPose(start), ConfigFromPose(Pose()), Dubins(), *cert);
  EXPECT_LE(d.iterations, 50);
  EXPECT_EQ(Dubins().NamedWord(d.result.trajectory.Word()), "RSR");
  EXPECT_NEAR(d.result.total_time, DubinsShortest({0.5, 0.4, -0.2}, {}).length, 1e-3);
}

}  // namespace
}  // namespace kinosynth
