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

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "kinosynth/errors.hpp"

namespace kinosynth {
namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

bool ExtremalCertificate::Valid() const {
  return IsFinite(k) && IsFinite(c) && std::isfinite(H) &&
         (k.squaredNorm() + c.squaredNorm() > 0.0);
}

ControlMoment ComputeControlMoment(const Pose& q, const Control& u,
                                   const Vec3& goal) {
  ControlMoment m;
  if (u.is_translation()) {
    m.moment = q.rotation * u.v;
    return m;
  }
  const Vec3 w = q.rotation * u.BodyAngular();
  const Vec3 r = q.position + q.rotation * u.center;
  m.moment = w.cross(goal - r);
  m.axis_term = w;
  return m;
}

ControlMoment ComputeControlMoment(const PointConfiguration& q,
                                   const Control& u, const Vec3& goal) {
  return ComputeControlMoment(ToPose(q), u, goal);
}

double HamiltonianValue(const ExtremalCertificate& cert, const Pose& q,
                        const Control& u, const Vec3& goal) {
  const ControlMoment m = ComputeControlMoment(q, u, goal);
  return cert.k.dot(m.moment) + cert.c.dot(m.axis_term);
}

double HamiltonianValue(const ExtremalCertificate& cert,
                        const PointConfiguration& q, const Control& u,
                        const Vec3& goal) {
  return HamiltonianValue(cert, ToPose(q), u, goal);
}

double HCurve::At(double s) const {
  if (affine) return a + b * s;
  return a + b * std::cos(rate * s) + c * std::sin(rate * s);
}

double HCurve::Slope(double s) const {
  if (affine) return b;
  return rate * (-b * std::sin(rate * s) + c * std::cos(rate * s));
}

double HCurve::MaxOn(double s0, double s1) const {
  double best = std::max(At(s0), At(s1));
  if (affine) return best;
  const double amp = std::hypot(b, c);
  if (amp == 0.0) return best;
  // Peaks at rate·s = atan2(c, b) + 2πn.
  const double delta = std::atan2(c, b);
  const double n = std::ceil((rate * s0 - delta) / (2 * kPi));
  if ((delta + 2 * kPi * n) / rate <= s1) best = std::max(best, a + amp);
  return best;
}

double HCurve::MinOn(double s0, double s1) const {
  HCurve neg{-a, -b, -c, rate, affine};
  return -neg.MaxOn(s0, s1);
}

double HCurve::FirstUpCrossing(double level, double s_min,
                               double s_max) const {
  if (affine) {
    if (b <= 0.0) return -1.0;
    const double s = (level - a) / b;
    return (s > s_min && s <= s_max) ? s : -1.0;
  }
  const double amp = std::hypot(b, c);
  if (amp == 0.0) return -1.0;
  const double d = (level - a) / amp;
  if (d > 1.0 || d < -1.0) return -1.0;
  const double delta = std::atan2(c, b);
  const double phase = delta - std::acos(d);
  // Smallest phase + 2πn strictly beyond s_min.
  double n = std::floor((rate * s_min - phase) / (2 * kPi));
  double s = (phase + 2 * kPi * n) / rate;
  while (s <= s_min) {
    n += 1.0;
    s = (phase + 2 * kPi * n) / rate;
  }
  return s <= s_max ? s : -1.0;
}

HCurve HAlongSegment(const ExtremalCertificate& cert, const Pose& q,
                     const Control& active, const Control& other,
                     const Vec3& goal) {
  HCurve h;
  const double h0 = HamiltonianValue(cert, q, other, goal);
  if (active.is_translation()) {
    h.affine = true;
    h.a = h0;
    h.b = HamiltonianValue(cert, Advance(q, active, 1.0), other, goal) - h0;
    return h;
  }
  h.rate = std::abs(active.omega);
  const double hq =
      HamiltonianValue(cert, Advance(q, active, 0.5 * kPi / h.rate), other, goal);
  const double hp =
      HamiltonianValue(cert, Advance(q, active, kPi / h.rate), other, goal);
  h.a = 0.5 * (h0 + hp);
  h.b = 0.5 * (h0 - hp);
  h.c = hq - h.a;
  return h;
}

std::vector<double> HProfile(const ExtremalCertificate& cert,
                             const PointConfiguration& q0,
                             const Trajectory& traj, const ControlSet& u,
                             const Vec3& goal, int samples_per_segment) {
  if (samples_per_segment < 2) {
    throw Error(ErrorCode::kInvalidInput, "samples_per_segment must be >= 2");
  }
  traj.Validate(u);
  std::vector<double> out;
  Pose q = ToPose(q0);
  for (const Segment& s : traj.segments()) {
    const Control& a = u[s.control];
    for (int i = 0; i < samples_per_segment; ++i) {
      const double t = s.duration * i / (samples_per_segment - 1);
      out.push_back(HamiltonianValue(cert, Advance(q, a, t), a, goal));
    }
    q = Advance(q, a, s.duration);
  }
  return out;
}

void PointVelocities(const Control& u, Vec3* u_o, Vec3* u_dx, Vec3* u_dy) {
  if (u.is_translation()) {
    *u_o = u.v;
    *u_dx = Vec3::Zero();
    *u_dy = Vec3::Zero();
    return;
  }
  const Vec3 w = u.BodyAngular();
  *u_o = w.cross(-u.center);
  *u_dx = w.cross(Vec3::UnitX());
  *u_dy = w.cross(Vec3::UnitY());
}

AdjointVector AdjointResiduals(const AdjointVector& lambda, const Mat3& r,
                               const Vec3& u_o, const Vec3& u_dx,
                               const Vec3& u_dy) {
  const Vec3 d_x = r.col(0), d_y = r.col(1);
  const Vec3 blocks[3] = {u_o, u_dx, u_dy};
  AdjointVector out;
  // R does not depend on p_o.
  out[0] = 0.0;
  out[1] = 0.0;
  out[2] = 0.0;
  for (int a = 0; a < 3; ++a) {
    const Vec3 e = Vec3::Unit(a);
    double gx = 0.0, gy = 0.0;
    for (int b = 0; b < 3; ++b) {
      const Vec3& w = blocks[b];
      const Vec3 lam = lambda.segment<3>(3 * b);
      // ∂R/∂d_x^a · w = w_x e_a + w_z (e_a × d_y)
      gx += lam.dot(w.x() * e + w.z() * e.cross(d_y));
      // ∂R/∂d_y^a · w = w_y e_a + w_z (d_x × e_a)
      gy += lam.dot(w.y() * e + w.z() * d_x.cross(e));
    }
    out[3 + a] = gx;
    out[6 + a] = gy;
  }
  return out;
}

AdjointVector AdjointResiduals(const AdjointVector& lambda,
                               const PointConfiguration& q, const Control& u) {
  Vec3 u_o, u_dx, u_dy;
  PointVelocities(u, &u_o, &u_dx, &u_dy);
  Mat3 r;
  r.col(0) = q.dx();
  r.col(1) = q.dy();
  r.col(2) = q.dx().cross(q.dy());
  return AdjointResiduals(lambda, r, u_o, u_dx, u_dy);
}

AdjointFit RecoverAdjoint(const Vec3& k, const PointConfiguration& q0,
                          const Trajectory& traj, const ControlSet& u,
                          int samples_per_segment) {
  traj.Validate(u);
  AdjointFit fit;
  fit.lambda.head<3>() = k;
  if (traj.empty()) return fit;
  const int n = std::max(samples_per_segment, 2);

  // Residual is linear in λ: build its 6×9 matrix per sample.
  std::vector<Eigen::Matrix<double, 6, 9>> rows;
  Pose q = ToPose(q0);
  for (const Segment& s : traj.segments()) {
    const Control& c = u[s.control];
    Vec3 u_o, u_dx, u_dy;
    PointVelocities(c, &u_o, &u_dx, &u_dy);
    for (int i = 0; i < n; ++i) {
      const Pose p = Advance(q, c, s.duration * i / (n - 1));
      Eigen::Matrix<double, 6, 9> m;
      for (int j = 0; j < 9; ++j) {
        m.col(j) = AdjointResiduals(AdjointVector::Unit(j), p.rotation.matrix(),
                                    u_o, u_dx, u_dy)
                       .tail<6>();
      }
      rows.push_back(m);
    }
    q = Advance(q, c, s.duration);
  }
  Eigen::MatrixXd a(6 * rows.size(), 6);
  Eigen::VectorXd rhs(6 * rows.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    a.block(6 * i, 0, 6, 6) = rows[i].rightCols<6>();
    rhs.segment(6 * i, 6) = -rows[i].leftCols<3>() * k;
  }
  fit.lambda.tail<6>() = a.completeOrthogonalDecomposition().solve(rhs);
  for (const auto& m : rows) {
    fit.max_residual = std::max(fit.max_residual, (m * fit.lambda).norm());
  }
  return fit;
}

NecessaryConditionReport VerifyNecessaryCondition(
    const ExtremalCertificate& cert, const Pose& q0, const Trajectory& traj,
    const ControlSet& u, const Vec3& goal, double tol) {
  traj.Validate(u);
  NecessaryConditionReport rep;
  Pose q = q0;
  for (const Segment& s : traj.segments()) {
    const Control& a = u[s.control];
    const HCurve self = HAlongSegment(cert, q, a, a, goal);
    rep.max_active_deviation =
        std::max({rep.max_active_deviation,
                  std::abs(self.MaxOn(0.0, s.duration) - cert.H),
                  std::abs(self.MinOn(0.0, s.duration) - cert.H)});
    for (int j = 0; j < u.size(); ++j) {
      if (j == s.control) continue;
      const HCurve h = HAlongSegment(cert, q, a, u[j], goal);
      rep.max_violation_by_inactive =
          std::max(rep.max_violation_by_inactive,
                   h.MaxOn(0.0, s.duration) - cert.H);
    }
    q = Advance(q, a, s.duration);
  }
  rep.constant = rep.max_active_deviation <= tol &&
                 rep.max_violation_by_inactive <= tol;
  return rep;
}

NecessaryConditionReport VerifyNecessaryCondition(
    const ExtremalCertificate& cert, const PointConfiguration& q0,
    const Trajectory& traj, const ControlSet& u, const Vec3& goal,
    double tol) {
  return VerifyNecessaryCondition(cert, ToPose(q0), traj, u, goal, tol);
}

}  // namespace kinosynth
