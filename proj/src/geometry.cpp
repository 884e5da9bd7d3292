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

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kinosynth/errors.hpp"

namespace kinosynth {

bool IsFinite(const Vec3& v) {
  return std::isfinite(v.x()) && std::isfinite(v.y()) && std::isfinite(v.z());
}

RotationMatrix RotationMatrix::FromColumns(const Vec3& d_x, const Vec3& d_y,
                                           double tol) {
  if (!IsFinite(d_x) || !IsFinite(d_y)) {
    throw Error(ErrorCode::kInvalidInput, "rotation has non-finite entries");
  }
  const double err = std::max({std::abs(d_x.norm() - 1.0),
                               std::abs(d_y.norm() - 1.0),
                               std::abs(d_x.dot(d_y))});
  if (err > tol) {
    throw Error(ErrorCode::kInvalidInput, "rotation columns not orthonormal");
  }
  Mat3 m;
  m.col(0) = d_x;
  m.col(1) = d_y;
  m.col(2) = d_x.cross(d_y);
  return RotationMatrix(m);
}

RotationMatrix RotationMatrix::FromMatrix(const Mat3& m, double tol) {
  RotationMatrix r = FromColumns(m.col(0), m.col(1), tol);
  // Reject reflections: the supplied third column must agree with d_x × d_y.
  if ((m.col(2) - r.dz()).norm() > 10 * tol ||
      std::abs(m.determinant() - 1.0) > 10 * tol) {
    throw Error(ErrorCode::kInvalidInput, "matrix is not a proper rotation");
  }
  return r;
}

RotationMatrix RotationMatrix::FromYaw(double theta) {
  Mat3 m = Mat3::Identity();
  const double c = std::cos(theta), s = std::sin(theta);
  m(0, 0) = c;
  m(0, 1) = -s;
  m(1, 0) = s;
  m(1, 1) = c;
  return RotationMatrix(m);
}

RotationMatrix RotationMatrix::operator*(const RotationMatrix& o) const {
  Mat3 m = m_ * o.m_;
  m.col(2) = m.col(0).cross(m.col(1));
  return RotationMatrix(m);
}

RotationMatrix RotationMatrix::Transpose() const {
  Mat3 m = m_.transpose();
  m.col(2) = m.col(0).cross(m.col(1));
  return RotationMatrix(m);
}

double RotationMatrix::Yaw() const { return std::atan2(m_(1, 0), m_(0, 0)); }

RotationMatrix AxisAngleRotation(const Vec3& axis, double angle) {
  if (!IsFinite(axis) || !std::isfinite(angle) ||
      std::abs(axis.norm() - 1.0) > kConstructTol) {
    throw Error(ErrorCode::kInvalidInput, "rotation axis must be unit length");
  }
  const double c = std::cos(angle), s = std::sin(angle);
  Mat3 k;
  k << 0, -axis.z(), axis.y(),  //
      axis.z(), 0, -axis.x(),   //
      -axis.y(), axis.x(), 0;
  Mat3 m = Mat3::Identity() * c + s * k + (1 - c) * axis * axis.transpose();
  m.col(2) = m.col(0).cross(m.col(1));
  return RotationMatrix(m);
}

Pose Pose::Planar(double x, double y, double theta) {
  return Pose{Vec3(x, y, 0.0), RotationMatrix::FromYaw(theta)};
}

double PointConfiguration::RigidityError() const {
  const Vec3 a = dx(), b = dy();
  return std::max({std::abs(a.norm() - 1.0), std::abs(b.norm() - 1.0),
                   std::abs(a.dot(b))});
}

PointConfiguration PointConfiguration::Planar(double x, double y,
                                              double theta) {
  return ConfigFromPose(Pose::Planar(x, y, theta));
}

PointConfiguration ConfigFromPose(const Vec3& position,
                                  const RotationMatrix& orientation) {
  PointConfiguration q;
  q.p_o = position;
  q.p_x = position + orientation.dx();
  q.p_y = position + orientation.dy();
  return q;
}

std::pair<Vec3, RotationMatrix> PoseFromConfig(const PointConfiguration& q,
                                               double tol) {
  if (!IsFinite(q.p_o) || !IsFinite(q.p_x) || !IsFinite(q.p_y) ||
      q.RigidityError() > tol) {
    throw Error(ErrorCode::kDegenerateConfiguration,
                "point configuration violates rigidity");
  }
  // Re-orthonormalize so downstream invariants hold to construction
  // tolerance even for slightly noisy input.
  const Vec3 d_x = q.dx().normalized();
  const Vec3 d_y = (q.dy() - d_x.dot(q.dy()) * d_x).normalized();
  return {q.p_o, RotationMatrix::FromColumns(d_x, d_y)};
}

Pose ToPose(const PointConfiguration& q, double tol) {
  auto [p, r] = PoseFromConfig(q, tol);
  return Pose{p, r};
}

double PointError(const PointConfiguration& a, const PointConfiguration& b) {
  return (a.p_o - b.p_o).norm() + (a.p_x - b.p_x).norm() +
         (a.p_y - b.p_y).norm();
}

double WrapTwoPi(double a) {
  constexpr double kTwoPi = 2 * std::numbers::pi;
  double r = std::fmod(a, kTwoPi);
  if (r < 0) r += kTwoPi;
  if (r >= kTwoPi) r -= kTwoPi;
  return r;
}

double WrapPi(double a) {
  return std::remainder(a, 2 * std::numbers::pi);
}

}  // namespace kinosynth
