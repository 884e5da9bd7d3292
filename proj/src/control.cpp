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

#include "kinosynth/control.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "kinosynth/errors.hpp"

namespace kinosynth {

Control Control::Translation(const Vec3& v, std::string name) {
  if (!IsFinite(v) || v.norm() <= 0.0) {
    throw Error(ErrorCode::kInvalidInput, "translation needs nonzero velocity");
  }
  Control u;
  u.kind = Kind::kTranslation;
  u.v = v;
  u.name = std::move(name);
  return u;
}

Control Control::Rotation(const Vec3& axis, const Vec3& center, double omega,
                          std::string name) {
  if (!IsFinite(axis) || std::abs(axis.norm() - 1.0) > kConstructTol) {
    throw Error(ErrorCode::kInvalidInput, "rotation axis must be unit length");
  }
  if (!IsFinite(center) || !std::isfinite(omega) || omega == 0.0) {
    throw Error(ErrorCode::kInvalidInput, "rotation needs nonzero omega");
  }
  Control u;
  u.kind = Kind::kRotation;
  u.axis = axis.normalized();
  u.center = center;
  u.omega = omega;
  u.name = std::move(name);
  return u;
}

Vec3 Control::BodyAngular() const {
  return is_rotation() ? Vec3(omega * axis) : Vec3::Zero();
}

double Control::Period() const {
  return is_rotation() ? 2 * std::numbers::pi / std::abs(omega)
                       : std::numeric_limits<double>::infinity();
}

bool Control::SameMotion(const Control& o, double tol) const {
  if (kind != o.kind) return false;
  if (is_translation()) return (v - o.v).norm() <= tol;
  if ((BodyAngular() - o.BodyAngular()).norm() > tol) return false;
  // Same screw axis: centers may differ by a shift along the axis.
  const Vec3 d = center - o.center;
  return (d - d.dot(axis) * axis).norm() <= tol;
}

ControlSet::ControlSet(std::vector<Control> controls, std::string name)
    : controls_(std::move(controls)), name_(std::move(name)) {
  if (controls_.empty()) {
    throw Error(ErrorCode::kInvalidInput, "control set is empty");
  }
  for (size_t i = 0; i < controls_.size(); ++i) {
    for (size_t j = i + 1; j < controls_.size(); ++j) {
      if (controls_[i].SameMotion(controls_[j])) {
        throw Error(ErrorCode::kInvalidInput,
                    "controls " + std::to_string(i) + " and " +
                        std::to_string(j) + " are identical");
      }
    }
  }
}

std::string ControlSet::Label(int i) const {
  if (i >= 0 && i < size() && !controls_[i].name.empty()) {
    return controls_[i].name;
  }
  return std::to_string(i);
}

std::string ControlSet::IndexWord(const std::vector<int>& word) {
  std::string out;
  for (size_t i = 0; i < word.size(); ++i) {
    if (i) out += '+';
    out += std::to_string(word[i]);
  }
  return out;
}

std::string ControlSet::NamedWord(const std::vector<int>& word) const {
  bool letters = true;
  for (int i : word) letters = letters && Label(i).size() == 1;
  if (!letters) return IndexWord(word);
  std::string out;
  for (int i : word) out += Label(i);
  return out;
}

bool ControlSet::IsPlanar() const {
  for (const Control& u : controls_) {
    if (u.is_translation() && std::abs(u.v.z()) > 1e-12) return false;
    if (u.is_rotation()) {
      if (std::abs(std::abs(u.axis.z()) - 1.0) > 1e-12) return false;
      if (std::abs(u.center.z()) > 1e-12) return false;
    }
  }
  return true;
}

Trajectory::Trajectory(const std::vector<Segment>& segments,
                       double drop_below) {
  for (const Segment& s : segments) {
    if (drop_below > 0.0 && s.duration < drop_below) continue;
    if (!segments_.empty() && segments_.back().control == s.control) {
      segments_.back().duration += s.duration;
    } else {
      segments_.push_back(s);
    }
  }
}

double Trajectory::total_time() const {
  double t = 0.0;
  for (const Segment& s : segments_) t += s.duration;
  return t;
}

std::vector<int> Trajectory::Word() const {
  std::vector<int> w;
  w.reserve(segments_.size());
  for (const Segment& s : segments_) w.push_back(s.control);
  return w;
}

void Trajectory::Validate(const ControlSet& u) const {
  for (const Segment& s : segments_) {
    if (!std::isfinite(s.duration) || s.duration < 0.0) {
      throw Error(ErrorCode::kInvalidDuration, "segment duration must be >= 0");
    }
    if (s.control < 0 || s.control >= u.size()) {
      throw Error(ErrorCode::kInvalidTrajectory,
                  "control index " + std::to_string(s.control) +
                      " out of range");
    }
  }
}

BodyTransform ControlTransform(const Control& u, double t) {
  if (!std::isfinite(t) || t < 0.0) {
    throw Error(ErrorCode::kInvalidDuration, "duration must be >= 0");
  }
  BodyTransform tf;
  if (u.is_translation()) {
    tf.translation = u.v * t;
    return tf;
  }
  tf.rotation = AxisAngleRotation(u.axis, u.omega * t);
  tf.translation = u.center - tf.rotation * u.center;
  return tf;
}

Pose Advance(const Pose& pose, const Control& u, double t) {
  const BodyTransform tf = ControlTransform(u, t);
  return Pose{pose.position + pose.rotation * tf.translation,
              pose.rotation * tf.rotation};
}

Pose Simulate(const Pose& q0, const Trajectory& traj, const ControlSet& u) {
  traj.Validate(u);
  Pose q = q0;
  for (const Segment& s : traj.segments()) q = Advance(q, u[s.control], s.duration);
  return q;
}

PointConfiguration Simulate(const PointConfiguration& q0,
                            const Trajectory& traj, const ControlSet& u) {
  if (traj.empty()) return q0;
  return ConfigFromPose(Simulate(ToPose(q0), traj, u));
}

WorldControl WorldFrameControl(const Pose& pose, const Control& u) {
  WorldControl w;
  if (u.is_translation()) {
    w.velocity = pose.rotation * u.v;
    return w;
  }
  w.axis = pose.rotation * u.BodyAngular();
  w.center = pose.position + pose.rotation * u.center;
  w.has_center = true;
  w.velocity = w.axis.cross(pose.position - w.center);
  return w;
}

WorldControl WorldFrameControl(const PointConfiguration& q, const Control& u) {
  return WorldFrameControl(ToPose(q), u);
}

ControlSet DubinsControlSet() {
  return ControlSet(
      {Control::Translation(Vec3(1, 0, 0), "S"),
       Control::Rotation(Vec3::UnitZ(), Vec3(0, 1, 0), 1.0, "L"),
       Control::Rotation(Vec3::UnitZ(), Vec3(0, -1, 0), -1.0, "R")},
      "dubins");
}

}  // namespace kinosynth
