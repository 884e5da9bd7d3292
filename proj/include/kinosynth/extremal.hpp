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

#ifndef KINOSYNTH_EXTREMAL_HPP_
#define KINOSYNTH_EXTREMAL_HPP_

#include <vector>

#include <Eigen/Core>

#include "kinosynth/control.hpp"
#include "kinosynth/geometry.hpp"

namespace kinosynth {

// Constant multipliers certifying an extremal: H_u = k·moment_u + ω̂_u·c,
// normalized so H = 1. Planar problems keep k.z = 0 and store the scalar c
// in c.z.
struct ExtremalCertificate {
  Vec3 k = Vec3::Zero();
  Vec3 c = Vec3::Zero();
  double H = 1.0;
  // Set when (k, c) came from an underdetermined solve (minimum norm).
  bool underdetermined = false;
  // H = 0 extremals are representable but never produced by the solver.
  bool abnormal = false;

  bool Valid() const;
};

struct ControlMoment {
  Vec3 moment = Vec3::Zero();
  Vec3 axis_term = Vec3::Zero();  // ω̂ for rotations, zero for translations
};

// Translation: (R·v, 0). Rotation: (ω̂ × (goal − r), ω̂).
ControlMoment ComputeControlMoment(const Pose& q, const Control& u,
                                   const Vec3& goal);
ControlMoment ComputeControlMoment(const PointConfiguration& q,
                                   const Control& u, const Vec3& goal);

double HamiltonianValue(const ExtremalCertificate& cert, const Pose& q,
                        const Control& u, const Vec3& goal);
double HamiltonianValue(const ExtremalCertificate& cert,
                        const PointConfiguration& q, const Control& u,
                        const Vec3& goal);

// H of `other` while `active` runs from `q`, as a function of elapsed time s.
// Rotation active: a + b·cos(rate·s) + c·sin(rate·s). Translation active:
// a + b·s. Both forms are exact.
struct HCurve {
  double a = 0.0, b = 0.0, c = 0.0;
  double rate = 0.0;
  bool affine = false;

  double At(double s) const;
  double Slope(double s) const;
  double MaxOn(double s0, double s1) const;
  double MinOn(double s0, double s1) const;
  // Smallest s in (s_min, s_max] where the curve rises through `level`;
  // negative when there is none.
  double FirstUpCrossing(double level, double s_min, double s_max) const;
};

HCurve HAlongSegment(const ExtremalCertificate& cert, const Pose& q,
                     const Control& active, const Control& other,
                     const Vec3& goal);

// H of the active control sampled along the trajectory.
std::vector<double> HProfile(const ExtremalCertificate& cert,
                             const PointConfiguration& q0,
                             const Trajectory& traj, const ControlSet& u,
                             const Vec3& goal, int samples_per_segment);

using AdjointVector = Eigen::Matrix<double, 9, 1>;

// Point-based adjoint derivative block. Entries 0..2 are identically zero;
// entries 3..8 are ∂/∂(d_x, d_y) of λ·(R u_o, R u_dx, R u_dy).
AdjointVector AdjointResiduals(const AdjointVector& lambda,
                               const PointConfiguration& q, const Control& u);
// Same, with the robot-frame point velocities given directly.
AdjointVector AdjointResiduals(const AdjointVector& lambda, const Mat3& r,
                               const Vec3& u_o, const Vec3& u_dx,
                               const Vec3& u_dy);

// Robot-frame velocities (u(p_o), u(d_x), u(d_y)) of a control.
void PointVelocities(const Control& u, Vec3* u_o, Vec3* u_dx, Vec3* u_dy);

struct AdjointFit {
  AdjointVector lambda = AdjointVector::Zero();
  double max_residual = 0.0;  // max over samples of the residual norm
};

// Fixes λ₁..₃ = k and solves λ₄..₉ in least squares from λ̇ = 0 stacked over
// samples along the trajectory.
AdjointFit RecoverAdjoint(const Vec3& k, const PointConfiguration& q0,
                          const Trajectory& traj, const ControlSet& u,
                          int samples_per_segment);

struct NecessaryConditionReport {
  bool constant = true;
  double max_active_deviation = 0.0;
  double max_violation_by_inactive = 0.0;
};

// Uses the exact per-segment H curves, so no violation can hide between
// samples.
NecessaryConditionReport VerifyNecessaryCondition(
    const ExtremalCertificate& cert, const PointConfiguration& q0,
    const Trajectory& traj, const ControlSet& u, const Vec3& goal,
    double tol = 1e-7);
NecessaryConditionReport VerifyNecessaryCondition(
    const ExtremalCertificate& cert, const Pose& q0, const Trajectory& traj,
    const ControlSet& u, const Vec3& goal, double tol = 1e-7);

}  // namespace kinosynth

#endif  // KINOSYNTH_EXTREMAL_HPP_
