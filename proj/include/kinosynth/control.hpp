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

#ifndef KINOSYNTH_CONTROL_HPP_
#define KINOSYNTH_CONTROL_HPP_

#include <string>
#include <vector>

#include "kinosynth/geometry.hpp"

namespace kinosynth {

// A constant-velocity body-frame motion: either a translation with velocity
// `v`, or a pure rotation (no pitch) about `axis` through `center` at signed
// rate `omega`.
struct Control {
  enum class Kind { kTranslation, kRotation };

  Kind kind = Kind::kTranslation;
  Vec3 v = Vec3::Zero();
  Vec3 axis = Vec3::UnitZ();
  Vec3 center = Vec3::Zero();
  double omega = 0.0;
  std::string name;

  static Control Translation(const Vec3& v, std::string name = "");
  static Control Rotation(const Vec3& axis, const Vec3& center, double omega,
                          std::string name = "");

  bool is_translation() const { return kind == Kind::kTranslation; }
  bool is_rotation() const { return kind == Kind::kRotation; }
  // Body angular velocity omega·axis (zero for translations).
  Vec3 BodyAngular() const;
  // Time for one full turn; infinity for translations.
  double Period() const;
  bool SameMotion(const Control& o, double tol = 1e-12) const;
};

class ControlSet {
 public:
  ControlSet() = default;
  explicit ControlSet(std::vector<Control> controls, std::string name = "");

  int size() const { return static_cast<int>(controls_.size()); }
  const Control& operator[](int i) const { return controls_[i]; }
  const std::vector<Control>& controls() const { return controls_; }
  const std::string& name() const { return name_; }

  // Human-readable label for control i; falls back to the index.
  std::string Label(int i) const;
  // "R+S+R"-style index word ("1+0+1") and a letter word ("RSR") when
  // every control has a one-character name.
  static std::string IndexWord(const std::vector<int>& word);
  std::string NamedWord(const std::vector<int>& word) const;

  // True when all motion stays in the xy plane for any planar pose.
  bool IsPlanar() const;

 private:
  std::vector<Control> controls_;
  std::string name_;
};

struct Segment {
  int control = 0;
  double duration = 0.0;
};

// Segments applied in order. Consecutive segments with the same control are
// merged on construction.
class Trajectory {
 public:
  Trajectory() = default;
  explicit Trajectory(const std::vector<Segment>& segments,
                      double drop_below = 0.0);

  const std::vector<Segment>& segments() const { return segments_; }
  bool empty() const { return segments_.empty(); }
  int size() const { return static_cast<int>(segments_.size()); }
  double total_time() const;
  std::vector<int> Word() const;

  // Throws kInvalidDuration / kInvalidTrajectory.
  void Validate(const ControlSet& u) const;

 private:
  std::vector<Segment> segments_;
};

// Rigid body-frame displacement: x ↦ translation + rotation·x.
struct BodyTransform {
  Vec3 translation = Vec3::Zero();
  RotationMatrix rotation;
};

// Throws kInvalidDuration for t < 0.
BodyTransform ControlTransform(const Control& u, double t);

// Applies `u` for `t` starting at `pose`.
Pose Advance(const Pose& pose, const Control& u, double t);

PointConfiguration Simulate(const PointConfiguration& q0,
                            const Trajectory& traj, const ControlSet& u);
Pose Simulate(const Pose& q0, const Trajectory& traj, const ControlSet& u);

struct WorldControl {
  Vec3 velocity = Vec3::Zero();  // of p_o
  Vec3 axis = Vec3::Zero();      // ω̂ = R·(omega·axis); zero for translations
  Vec3 center = Vec3::Zero();    // r = p_o + R·center
  bool has_center = false;
};

WorldControl WorldFrameControl(const Pose& pose, const Control& u);
WorldControl WorldFrameControl(const PointConfiguration& q, const Control& u);

// Canonical Dubins set: S = forward unit translation, L/R = unit-radius
// left/right turns. Indices S=0, L=1, R=2.
ControlSet DubinsControlSet();

}  // namespace kinosynth

#endif  // KINOSYNTH_CONTROL_HPP_
