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

#include "kinosynth/extremal.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "kinosynth/dubins.hpp"
#include "kinosynth/errors.hpp"
#include "kinosynth/solver.hpp"

namespace kinosynth {
namespace {

constexpr double kPi = 3.14159265358979323846;

const ControlSet& Dubins() {
  static const ControlSet u = DubinsControlSet();
  return u;
}

ExtremalCertificate Cert(const Vec3& k, const Vec3& c = Vec3::Zero()) {
  ExtremalCertificate e;
  e.k = k;
  e.c = c;
  return e;
}

TEST(ControlMomentTest, BasesAtHalfPointFour) {
  const Pose q = Pose::Planar(0.5, 0.4, 0);
  EXPECT_NEAR((WorldFrameControl(q, Dubins()[2]).center - Vec3(0.5, -0.6, 0)).norm(), 0, 1e-15);
  EXPECT_NEAR((ComputeControlMoment(q, Dubins()[2], Vec3::Zero()).moment -
               Vec3(0.6, 0.5, 0)).norm(), 0, 1e-15);
  EXPECT_NEAR((WorldFrameControl(q, Dubins()[1]).center - Vec3(0.5, 1.4, 0)).norm(), 0, 1e-15);
  EXPECT_NEAR((ComputeControlMoment(q, Dubins()[1], Vec3::Zero()).moment -
               Vec3(1.4, -0.5, 0)).norm(), 0, 1e-15);
}

TEST(ControlMomentTest, TranslationIgnoresGoal) {
  const ControlMoment m =
      ComputeControlMoment(Pose(), Dubins()[0], Vec3(3.0, -7.0, 2.0));
  EXPECT_EQ(m.moment, Vec3(1, 0, 0));
  EXPECT_EQ(m.axis_term, Vec3::Zero());
}

TEST(HamiltonianTest, AllThreeAtOneOnTheBoundaryPoint) {
  const Pose q = Pose::Planar(1, 1, 0);
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(HamiltonianValue(Cert(Vec3(1, 1, 0)), q, Dubins()[i], Vec3::Zero()), 1.0,
                1e-15);
  }
}

TEST(HamiltonianTest, InteriorCheckpoint) {
  const ExtremalCertificate c = Cert(Vec3(1, 0.8, 0));
  const Pose q = Pose::Planar(0.5, 0.4, 0);
  EXPECT_NEAR(HamiltonianValue(c, q, Dubins()[0], Vec3::Zero()), 1.0, 1e-15);
  EXPECT_NEAR(HamiltonianValue(c, q, Dubins()[2], Vec3::Zero()), 1.0, 1e-15);
  EXPECT_NEAR(HamiltonianValue(c, Pose(), Dubins()[2], Vec3::Zero()), 1.0, 1e-15);
}

TEST(HamiltonianTest, AlignedTranslation) {
  const Pose q = Pose::Planar(-2, 5, 0);
  EXPECT_DOUBLE_EQ(HamiltonianValue(Cert(Vec3(1, 0, 0)), q, Dubins()[0], Vec3(4, 4, 0)), 1.0);
}

TEST(HamiltonianProperty, LinearInMultipliers) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const Vec3 k(n(rng), n(rng), n(rng)), c(n(rng), n(rng), n(rng));
    const double a = n(rng);
    const Pose q = Pose::Planar(n(rng), n(rng), n(rng));
    const Control& u = Dubins()[i % 3];
    EXPECT_NEAR(HamiltonianValue(Cert(a * k, a * c), q, u, Vec3::Zero()),
                a * HamiltonianValue(Cert(k, c), q, u, Vec3::Zero()), 1e-12);
  }
}

TEST(HamiltonianProperty, CentreShiftAlongAxis) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const Vec3 axis = Vec3(n(rng), n(rng), n(rng)).normalized();
    const Vec3 centre(n(rng), n(rng), n(rng));
    const double w = n(rng);
    const Control a = Control::Rotation(axis, centre, w);
    const Control b = Control::Rotation(axis, centre + n(rng) * axis, w);
    const Pose q{Vec3(n(rng), n(rng), n(rng)),
                 AxisAngleRotation(Vec3(n(rng), n(rng), n(rng)).normalized(), n(rng))};
    const ExtremalCertificate c = Cert(Vec3(n(rng), n(rng), n(rng)), Vec3(n(rng), n(rng), n(rng)));
    const Vec3 g(n(rng), n(rng), n(rng));
    EXPECT_NEAR(HamiltonianValue(c, q, a, g), HamiltonianValue(c, q, b, g), 1e-12);
  }
}

TEST(HamiltonianProperty, TranslationPartIsRateOfKDotPosition) {
  // d/dt k·p_o(t) equals k·moment for a translation, and k·(ω̂×(p_o − r))
  // for a rotation, the rotation moment measured from p_o.
  std::mt19937_64 rng(6);
  std::normal_distribution<double> n(0.0, 1.0);
  const double h = 1e-6;
  for (int i = 0; i < 100; ++i) {
    const Control& u = Dubins()[i % 3];
    const Pose q = Pose::Planar(n(rng), n(rng), n(rng));
    const Vec3 k(n(rng), n(rng), 0.0);
    const Pose later = Advance(q, u, h);
    const Pose mid = Advance(q, u, h / 2);
    const double rate = k.dot(later.position - q.position) / h;
    // Moment about the moving origin itself is the origin's velocity.
    const double expected =
        HamiltonianValue(Cert(k), mid, u, mid.position);
    EXPECT_NEAR(rate, expected, 1e-6);
  }
}

TEST(HCurveTest, MatchesDirectEvaluation) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const ExtremalCertificate c = Cert(Vec3(n(rng), n(rng), 0), Vec3(0, 0, n(rng)));
    const Pose q = Pose::Planar(n(rng), n(rng), n(rng));
    const Control& active = Dubins()[i % 3];
    const Control& other = Dubins()[(i + 1) % 3];
    const HCurve curve = HAlongSegment(c, q, active, other, Vec3::Zero());
    for (double s : {0.0, 0.3, 1.7, 4.0}) {
      EXPECT_NEAR(curve.At(s), HamiltonianValue(c, Advance(q, active, s), other, Vec3::Zero()),
                  1e-12);
    }
    const double up = curve.FirstUpCrossing(curve.At(0) + 0.1, 1e-12, 10.0);
    if (up > 0) {
      EXPECT_NEAR(curve.At(up), curve.At(0) + 0.1, 1e-9);
      EXPECT_GT(curve.Slope(up), 0.0);
    }
  }
}

TEST(HProfileTest, SolvedRsrIsConstant) {
  const Pose start = Pose::Planar(0.5, 0.4, -0.2);
  const SolveResult r = SolveShortest(start, Pose(), Dubins());
  EXPECT_EQ(Dubins().NamedWord(r.trajectory.Word()), "RSR");
  const auto h = HProfile(r.certificate, ConfigFromPose(start), r.trajectory, Dubins(),
                          Vec3::Zero(), 50);
  for (double v : h) EXPECT_NEAR(v, 1.0, 1e-6);
}

TEST(HProfileTest, SingleTranslationExactlyOne) {
  const Control s = Control::Translation(Vec3(2, 0, 0));
  const ControlSet u({s});
  const auto h = HProfile(Cert(Vec3(0.5, 0, 0)), PointConfiguration(),
                          Trajectory({{0, 3.0}}), u, Vec3(6, 0, 0), 10);
  for (double v : h) EXPECT_EQ(v, 1.0);
}

TEST(HProfileTest, PerturbedCertificateDrifts) {
  const Pose start = Pose::Planar(0.5, 0.4, -0.2);
  const SolveResult r = SolveShortest(start, Pose(), Dubins());
  ExtremalCertificate c = r.certificate;
  c.k += Vec3(0.1, 0, 0);
  double worst = 0.0;
  for (double v : HProfile(c, ConfigFromPose(start), r.trajectory, Dubins(), Vec3::Zero(), 50)) {
    worst = std::max(worst, std::abs(v - 1.0));
  }
  EXPECT_GT(worst, 1e-3);
}

TEST(HProfileTest, RejectsTooFewSamples) {
  EXPECT_THROW(HProfile(Cert(Vec3(1, 0, 0)), PointConfiguration(), Trajectory({{0, 1.0}}),
                        Dubins(), Vec3::Zero(), 1),
               Error);
}

TEST(AdjointTest, FirstThreeEntriesAreExactlyZero) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    AdjointVector l;
    for (int j = 0; j < 9; ++j) l[j] = n(rng);
    const Control u = i % 2 ? Control::Translation(Vec3(n(rng), n(rng), n(rng)))
                            : Control::Rotation(Vec3(n(rng), n(rng), n(rng)).normalized(),
                                                Vec3(n(rng), n(rng), n(rng)), n(rng));
    const AdjointVector r = AdjointResiduals(l, PointConfiguration::Planar(n(rng), n(rng), n(rng)), u);
    EXPECT_EQ(r[0], 0.0);
    EXPECT_EQ(r[1], 0.0);
    EXPECT_EQ(r[2], 0.0);
  }
}

TEST(AdjointTest, ZeroMultipliersGiveZero) {
  const AdjointVector r =
      AdjointResiduals(AdjointVector::Zero(), PointConfiguration::Planar(1, 2, 3), Dubins()[1]);
  EXPECT_EQ(r.norm(), 0.0);
}

TEST(AdjointTest, TranslationOnlyCouplesPositionMultipliers) {
  // With u(d_x) = u(d_y) = 0 only λ₁..₃ times u(p_o) survive, so λ₁..₃ = 0
  // leaves nothing.
  AdjointVector l = AdjointVector::Zero();
  for (int j = 3; j < 9; ++j) l[j] = 0.1 * j;
  const AdjointVector r =
      AdjointResiduals(l, PointConfiguration::Planar(1, 2, 0.3), Control::Translation(Vec3(1, 2, 3)));
  EXPECT_EQ(r.norm(), 0.0);
  l.head<3>() = Vec3(1, 0, 0);
  const AdjointVector r2 =
      AdjointResiduals(l, PointConfiguration::Planar(1, 2, 0.3), Control::Translation(Vec3(1, 2, 3)));
  EXPECT_NEAR(r2[3], 1.0, 1e-15);  // λ₁·u(p_o)_x
}

TEST(AdjointTest, RecoveredMultipliersOnTurnsOnly) {
  // A pure-turn path admits an exact constant adjoint; the recovery must find
  // it.
  const Pose start = Pose::Planar(0, 0, 0);
  const Trajectory t({{1, 2.0}});
  const ExtremalCertificate c = Cert(Vec3(0.5, 0.25, 0), Vec3(0, 0, 1.0));
  const AdjointFit fit = RecoverAdjoint(c.k, ConfigFromPose(start), t, Dubins(), 16);
  EXPECT_EQ(fit.lambda.head<3>(), c.k);
  EXPECT_LE(fit.max_residual, 1e-9);
}

TEST(VerifyNecessaryConditionTest, OptimalRsrPasses) {
  const Pose start = Pose::Planar(0.5, 0.4, -0.2);
  const SolveResult r = SolveShortest(start, Pose(), Dubins());
  const NecessaryConditionReport rep =
      VerifyNecessaryCondition(r.certificate, start, r.trajectory, Dubins(), Vec3::Zero(), 1e-6);
  EXPECT_TRUE(rep.constant);
  EXPECT_LE(rep.max_active_deviation, 1e-6);
  EXPECT_LE(rep.max_violation_by_inactive, 1e-6);
}

TEST(VerifyNecessaryConditionTest, SuboptimalCscStillExtremal) {
  // Necessary, not sufficient: the longer LSL passes too.
  const PlanarState s{0.5, 0.4, -0.2};
  for (const DubinsWord& w : DubinsCandidates(s, PlanarState{})) {
    if (w.type != DubinsType::kLSL) continue;
    NecessaryConditionReport rep;
    RecoverCertificate(Pose::Planar(s.x, s.y, s.theta), Pose(), DubinsToTrajectory(w),
                       Dubins(), {}, 1e-7, &rep);
    EXPECT_TRUE(rep.constant);
    EXPECT_LE(rep.max_violation_by_inactive, 1e-7);
  }
}

TEST(VerifyNecessaryConditionTest, CccWithLongOuterArcFails) {
  // An outer arc longer than the middle one lets the straight control rise
  // above the active turn.
  const PlanarState s{2, 3, 1};
  int checked = 0;
  for (const DubinsWord& w : DubinsCandidates(s, PlanarState{})) {
    if (w.type != DubinsType::kLRL) continue;
    ASSERT_GT(w.t, w.p);
    NecessaryConditionReport rep;
    RecoverCertificate(Pose::Planar(s.x, s.y, s.theta), Pose(), DubinsToTrajectory(w),
                       Dubins(), {}, 1e-7, &rep);
    EXPECT_FALSE(rep.constant && rep.max_violation_by_inactive <= 1e-7);
    ++checked;
  }
  EXPECT_EQ(checked, 1);
}

TEST(VerifyNecessaryConditionTest, StraightAlignedSegment) {
  const NecessaryConditionReport rep = VerifyNecessaryCondition(
      Cert(Vec3(1, 0, 0)), Pose::Planar(-3, 0, 0), Trajectory({{0, 3.0}}), Dubins(),
      Vec3::Zero(), 1e-9);
  EXPECT_TRUE(rep.constant);
}

}  // namespace
}  // namespace kinosynth
