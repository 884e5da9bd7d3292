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

#ifndef KINOSYNTH_SWITCHING_HPP_
#define KINOSYNTH_SWITCHING_HPP_

#include <optional>
#include <string>
#include <vector>

#include "kinosynth/control.hpp"
#include "kinosynth/extremal.hpp"
#include "kinosynth/geometry.hpp"

namespace kinosynth {

// Two candidate switching controls at q plus the last control, evaluated at
// the goal pose.
struct Hypothesis {
  int first = 0;
  int second = 1;
  int last = 0;
};

// ∇_q of h(q) = k·(ω̂×(g − r(q))) − 1 over position: ω̂ × k for rotations,
// zero for translations.
Vec3 GradQConstraint(const Vec3& k, const Control& u, const Pose& q);
// ∇_k of the same constraint: the control moment.
Vec3 GradKConstraint(const Control& u, const Pose& q, const Vec3& goal);

// Solves the three H = 1 equations for (k, c). Empty when inconsistent;
// minimum norm with `underdetermined` set when the system is singular.
std::optional<ExtremalCertificate> FeasibleK(const Pose& q,
                                             const Hypothesis& hyp,
                                             const ControlSet& u,
                                             const Pose& goal);

struct DeltaDirections {
  std::vector<Vec3> grad_k_basis;
  std::vector<double> weights;
  Vec3 delta_k = Vec3::Zero();
  Vec3 delta_q = Vec3::Zero();
};

struct Improvement {
  Vec3 delta_k = Vec3::Zero();  // unit
  double margin = 0.0;          // smallest increase over all moments
  int basis = -1;               // which hypothesized moment it came from
};

// Tries each grad_k basis (normalized) as Δk: it must not be parallel to k
// and must raise every moment by more than 1e-9. Best margin wins.
std::optional<Improvement> ImprovingDeltaK(const Vec3& k,
                                           const std::vector<Vec3>& moments);

struct WeightRelation {
  double alpha = 0.0, beta = 0.0;  // unit-normalized weights
  bool vacuous = false;            // both bases orthogonal to d
  DeltaDirections directions;
};

// Imposes Δk·d = 0 for Δk = α·b_first + β·b_second where d is the last
// control's moment at the goal. Throws kDegenerateLastControl when d = 0.
WeightRelation ComputeWeightRelation(const Pose& q, const Hypothesis& hyp,
                                     const ControlSet& u, const Pose& goal,
                                     const ExtremalCertificate& cert);

// Solves Δ·[(k+Δk)×(ω̂_i−ω̂_j)] = Δk·(m_i − m_j) for a slice direction Δ,
// taking Δ along Δk when possible. Returns a unit vector, or empty.
std::optional<Vec3> JointDeltaTest(const ExtremalCertificate& cert,
                                   const Vec3& delta_k, const Pose& q,
                                   const Control& u_i, const Control& u_j,
                                   const Vec3& goal, bool planar = true);

enum class Verdict { kNoFeasibleK, kInterior, kOnCurve };
const char* VerdictName(Verdict v);

struct HypothesisOutcome {
  Hypothesis hypothesis;
  Verdict verdict = Verdict::kNoFeasibleK;
  std::optional<ExtremalCertificate> cert;
  std::optional<Vec3> delta_k;
  std::optional<Vec3> tangent;
  int first_hint = -1;
  int last_hint = -1;
  double margin = 0.0;
};

struct SwitchClassification {
  Verdict verdict = Verdict::kNoFeasibleK;
  int first_hint = -1;  // Interior only
  int last_hint = -1;
  std::optional<Vec3> tangent;  // OnCurve only
  std::optional<ExtremalCertificate> cert;
  std::optional<Vec3> delta_k;
  Hypothesis hypothesis;
  std::vector<HypothesisOutcome> outcomes;
};

// Every (i<j, last) triple except translation–translation pairs.
std::vector<Hypothesis> DefaultHypotheses(const ControlSet& u);

HypothesisOutcome TestHypothesis(const Pose& q, const Hypothesis& hyp,
                                 const ControlSet& u, const Pose& goal);

// Aggregates with OnCurve > Interior > NoFeasibleK.
SwitchClassification ClassifyConfiguration(
    const Pose& q, const ControlSet& u, const Pose& goal,
    const std::optional<std::vector<Hypothesis>>& hypotheses = std::nullopt);

}  // namespace kinosynth

#endif  // KINOSYNTH_SWITCHING_HPP_
