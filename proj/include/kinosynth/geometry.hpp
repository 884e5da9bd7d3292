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

#ifndef KINOSYNTH_GEOMETRY_HPP_
#define KINOSYNTH_GEOMETRY_HPP_

#include <utility>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace kinosynth {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Tolerances for rigidity checks. Construction is strict; anything read from
// a file is held to the looser bound.
inline constexpr double kConstructTol = 1e-9;
inline constexpr double kExternalTol = 1e-6;

bool IsFinite(const Vec3& v);

// Proper rotation. Columns are d_x, d_y, d_z; d_z is always rebuilt as
// d_x × d_y so it is never stored independently.
class RotationMatrix {
 public:
  RotationMatrix() : m_(Mat3::Identity()) {}

  static RotationMatrix Identity() { return RotationMatrix(); }

  // Throws kInvalidInput unless (d_x, d_y) are orthonormal within `tol`.
  static RotationMatrix FromColumns(const Vec3& d_x, const Vec3& d_y,
                                    double tol = kConstructTol);
  // Rows as written in problem files.
  static RotationMatrix FromMatrix(const Mat3& m, double tol = kExternalTol);
  // Rotation about +z by `theta`.
  static RotationMatrix FromYaw(double theta);

  const Mat3& matrix() const { return m_; }
  Vec3 dx() const { return m_.col(0); }
  Vec3 dy() const { return m_.col(1); }
  Vec3 dz() const { return m_.col(2); }

  Vec3 operator*(const Vec3& v) const { return m_ * v; }
  RotationMatrix operator*(const RotationMatrix& o) const;
  RotationMatrix Transpose() const;

  // Heading of d_x in the xy plane.
  double Yaw() const;

 private:
  explicit RotationMatrix(const Mat3& m) : m_(m) {}
  Mat3 m_;

  friend RotationMatrix AxisAngleRotation(const Vec3& axis, double angle);
};

// Right-hand rotation by `angle` about the unit `axis`.
RotationMatrix AxisAngleRotation(const Vec3& axis, double angle);

struct Pose {
  Vec3 position = Vec3::Zero();
  RotationMatrix rotation;

  static Pose Planar(double x, double y, double theta);
};

// A rigid body pose as three world points: origin and the tips of the unit
// body x and y axes.
struct PointConfiguration {
  Vec3 p_o = Vec3::Zero();
  Vec3 p_x = Vec3::UnitX();
  Vec3 p_y = Vec3::UnitY();

  Vec3 dx() const { return p_x - p_o; }
  Vec3 dy() const { return p_y - p_o; }

  // Largest violation of |d_x| = |d_y| = 1, d_x·d_y = 0.
  double RigidityError() const;

  static PointConfiguration Planar(double x, double y, double theta);
};

PointConfiguration ConfigFromPose(const Vec3& position,
                                  const RotationMatrix& orientation);
inline PointConfiguration ConfigFromPose(const Pose& pose) {
  return ConfigFromPose(pose.position, pose.rotation);
}

// Throws kDegenerateConfiguration when rigidity is off by more than `tol`.
std::pair<Vec3, RotationMatrix> PoseFromConfig(const PointConfiguration& q,
                                               double tol = kExternalTol);
Pose ToPose(const PointConfiguration& q, double tol = kExternalTol);

// Summed three-point mismatch; the solver's goal metric.
double PointError(const PointConfiguration& a, const PointConfiguration& b);

// Wraps into [0, 2π).
double WrapTwoPi(double a);
// Wraps into (-π, π].
double WrapPi(double a);

}  // namespace kinosynth

#endif  // KINOSYNTH_GEOMETRY_HPP_
