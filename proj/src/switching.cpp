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

#include "kinosynth/switching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include <Eigen/Dense>

#include "kinosynth/errors.hpp"
#include "kinosynth/solver.hpp"

namespace kinosynth {
namespace {

// Step length used for Δk when testing the joint Δ condition.
constexpr double kDeltaStep = 1e-3;

int Rank(const Hypothesis& h) { return h.first * 10000 + h.second * 100 + h.last; }

}  // namespace

Vec3 GradQConstraint(const Vec3& k, const Control& u, const Pose& q) {
  if (u.is_translation()) return Vec3::Zero();
  const Vec3 w = q.rotation * u.BodyAngular();
  return w.cross(k);
}

Vec3 GradKConstraint(const Control& u, const Pose& q, const Vec3& goal) {
  return ComputeControlMoment(q, u, goal).moment;
}

std::optional<ExtremalCertificate> FeasibleK(const Pose& q,
                                             const Hypothesis& hyp,
                                             const ControlSet& u,
                                             const Pose& goal) {
  const bool planar = IsPlanarProblem(q, goal, u);
  const int dim = planar ? 3 : 6;
  const ControlMoment m[3] = {
      ComputeControlMoment(q, u[hyp.first], goal.position),
      ComputeControlMoment(q, u[hyp.second], goal.position),
      ComputeControlMoment(goal, u[hyp.last], goal.position)};
  Eigen::MatrixXd a(3, dim);
  for (int i = 0; i < 3; ++i) {
    if (planar) {
      a.row(i) << m[i].moment.x(), m[i].moment.y(), m[i].axis_term.z();
    } else {
      a.row(i) << m[i].moment.transpose(), m[i].axis_term.transpose();
    }
  }
  const Eigen::Vector3d ones = Eigen::Vector3d::Ones();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV | Eigen::ComputeThinU);
  const double top = std::max(1.0, svd.singularValues()[0]);
  svd.setThreshold(1e-10);
  const Eigen::VectorXd x = svd.solve(ones);
  if ((a * x - ones).norm() > 1e-9 * top) return std::nullopt;
  ExtremalCertificate cert;
  if (planar) {
    cert.k = Vec3(x[0], x[1], 0.0);
    cert.c = Vec3(0.0, 0.0, x[2]);
  } else {
    cert.k = x.head<3>();
    cert.c = x.tail<3>();
  }
  cert.underdetermined = svd.rank() < dim;
  return cert;
}

std::optional<Improvement> ImprovingDeltaK(const Vec3& k,
                                           const std::vector<Vec3>& moments) {
  std::optional<Improvement> best;
  const double kn = k.norm();
  for (size_t b = 0; b < moments.size(); ++b) {
    if (moments[b].norm() < 1e-12) continue;
    const Vec3 dk = moments[b].normalized();
    // Scaling k is a gauge direction, not an improvement.
    if (kn > 0.0 && dk.cross(k / kn).norm() < 1e-9) continue;
    double margin = std::numeric_limits<double>::infinity();
    for (const Vec3& m : moments) margin = std::min(margin, dk.dot(m));
    if (!(margin > 1e-9)) continue;
    if (!best || margin > best->margin + 1e-15) {
      best = Improvement{dk, margin, static_cast<int>(b)};
    }
  }
  return best;
}

WeightRelation ComputeWeightRelation(const Pose& q, const Hypothesis& hyp,
                                     const ControlSet& u, const Pose& goal,
                                     const ExtremalCertificate& cert) {
  const Vec3 bi = GradKConstraint(u[hyp.first], q, goal.position);
  const Vec3 bj = GradKConstraint(u[hyp.second], q, goal.position);
  const Vec3 d = GradKConstraint(u[hyp.last], goal, goal.position);
  if (d.norm() < 1e-12) {
    throw Error(ErrorCode::kDegenerateLastControl,
                "last control has zero moment at the goal");
  }
  WeightRelation rel;
  rel.directions.grad_k_basis = {bi, bj};
  double alpha = bj.dot(d), beta = -bi.dot(d);
  const double scale = std::max(bi.norm(), bj.norm()) * d.norm();
  if (std::hypot(alpha, beta) <= 1e-12 * std::max(scale, 1.0)) {
    rel.vacuous = true;
    alpha = 1.0;
    beta = 0.0;
  }
  const double n = std::hypot(alpha, beta);
  alpha /= n;
  beta /= n;
  Vec3 dk = alpha * bi + beta * bj;
  if (dk.dot(cert.k) < 0.0 || (dk.dot(cert.k) == 0.0 && alpha < 0.0)) {
    alpha = -alpha;
    beta = -beta;
    dk = -dk;
  }
  rel.alpha = alpha;
  rel.beta = beta;
  rel.directions.weights = {alpha, beta};
  rel.directions.delta_k = dk;
  return rel;
}

std::optional<Vec3> JointDeltaTest(const ExtremalCertificate& cert,
                                   const Vec3& delta_k, const Pose& q,
                                   const Control& u_i, const Control& u_j,
                                   const Vec3& goal, bool planar) {
  const ControlMoment mi = ComputeControlMoment(q, u_i, goal);
  const ControlMoment mj = ComputeControlMoment(q, u_j, goal);
  Vec3 normal = (cert.k + delta_k).cross(mi.axis_term - mj.axis_term);
  const double rhs = delta_k.dot(mi.moment - mj.moment);
  if (planar) normal.z() = 0.0;
  const double scale = std::max(1.0, (mi.moment - mj.moment).norm()) *
                       std::max(delta_k.norm(), 1e-300);
  auto perpendicular = [&](const Vec3& n) -> Vec3 {
    if (planar) return Vec3(-n.y(), n.x(), 0.0).normalized();
    return n.unitOrthogonal();
  };
  if (normal.norm() < 1e-12) {
    // Same axis: the left side vanishes, so only Δk·(m_i − m_j) = 0 can hold.
    if (std::abs(rhs) > 1e-12 * scale) return std::nullopt;
    if (delta_k.norm() > 0.0) return Vec3(delta_k.normalized());
    return Vec3::UnitX();
  }
  if (delta_k.norm() == 0.0 || std::abs(rhs) <= 1e-15) {
    return perpendicular(normal);
  }
  Vec3 dir = delta_k.normalized();
  if (planar) {
    dir.z() = 0.0;
    if (dir.norm() > 0) dir.normalize();
  }
  Vec3 delta;
  const double along = dir.dot(normal);
  if (std::abs(along) > 1e-9 * normal.norm()) {
    delta = (rhs / along) * dir;
  } else {
    delta = (rhs / normal.squaredNorm()) * normal;
  }
  if (delta.norm() == 0.0) return std::nullopt;
  return Vec3(delta.normalized());
}

const char* VerdictName(Verdict v) {
  switch (v) {
    case Verdict::kNoFeasibleK: return "NoFeasibleK";
    case Verdict::kInterior: return "Interior";
    case Verdict::kOnCurve: return "OnCurve";
  }
  return "?";
}

std::vector<Hypothesis> DefaultHypotheses(const ControlSet& u) {
  std::vector<Hypothesis> out;
  for (int i = 0; i < u.size(); ++i) {
    for (int j = i + 1; j < u.size(); ++j) {
      if (u[i].is_translation() && u[j].is_translation()) continue;
      for (int l = 0; l < u.size(); ++l) out.push_back({i, j, l});
    }
  }
  return out;
}

HypothesisOutcome TestHypothesis(const Pose& q, const Hypothesis& hyp,
                                 const ControlSet& u, const Pose& goal) {
  HypothesisOutcome out;
  out.hypothesis = hyp;
  out.cert = FeasibleK(q, hyp, u, goal);
  if (!out.cert) return out;
  const Vec3& g = goal.position;
  const std::vector<Vec3> moments = {GradKConstraint(u[hyp.first], q, g),
                                     GradKConstraint(u[hyp.second], q, g),
                                     GradKConstraint(u[hyp.last], goal, g)};
  if (auto imp = ImprovingDeltaK(out.cert->k, moments)) {
    out.verdict = Verdict::kInterior;
    out.delta_k = imp->delta_k;
    out.margin = imp->margin;
    // The pair member that gains more is the control to keep.
    out.first_hint = imp->delta_k.dot(moments[1]) > imp->delta_k.dot(moments[0])
                         ? hyp.second
                         : hyp.first;
    out.last_hint = hyp.last;
    return out;
  }
  WeightRelation rel;
  try {
    rel = ComputeWeightRelation(q, hyp, u, goal, *out.cert);
  } catch (const Error&) {
    return out;
  }
  const Vec3 dk = kDeltaStep * rel.directions.delta_k;
  out.delta_k = rel.directions.delta_k;
  out.tangent = JointDeltaTest(*out.cert, dk, q, u[hyp.first], u[hyp.second], g,
                               IsPlanarProblem(q, goal, u));
  if (out.tangent) out.verdict = Verdict::kOnCurve;
  return out;
}

SwitchClassification ClassifyConfiguration(
    const Pose& q, const ControlSet& u, const Pose& goal,
    const std::optional<std::vector<Hypothesis>>& hypotheses) {
  SwitchClassification result;
  const std::vector<Hypothesis> hyps = hypotheses ? *hypotheses : DefaultHypotheses(u);
  for (const Hypothesis& h : hyps) {
    if (h.first == h.second || h.first < 0 || h.second < 0 || h.last < 0 ||
        h.first >= u.size() || h.second >= u.size() || h.last >= u.size()) {
      throw Error(ErrorCode::kInvalidInput, "bad hypothesis indices");
    }
    result.outcomes.push_back(TestHypothesis(q, h, u, goal));
  }
  // Preference within a verdict: determined systems, rotation pairs, larger
  // margin, hint agreeing with the last control, then index order.
  auto key = [&](const HypothesisOutcome& o) {
    const bool rot_pair = u[o.hypothesis.first].is_rotation() &&
                          u[o.hypothesis.second].is_rotation();
    return std::make_tuple(static_cast<int>(o.verdict),
                           o.cert && !o.cert->underdetermined ? 1 : 0,
                           rot_pair ? 1 : 0,
                           o.verdict == Verdict::kInterior ? o.margin : 0.0,
                           o.first_hint == o.last_hint ? 1 : 0,
                           -Rank(o.hypothesis));
  };
  const HypothesisOutcome* best = nullptr;
  for (const HypothesisOutcome& o : result.outcomes) {
    if (!best || key(o) > key(*best)) best = &o;
  }
  if (!best) return result;
  result.verdict = best->verdict;
  result.hypothesis = best->hypothesis;
  result.cert = best->cert;
  result.delta_k = best->delta_k;
  if (best->verdict == Verdict::kOnCurve) result.tangent = best->tangent;
  if (best->verdict == Verdict::kInterior) {
    result.first_hint = best->first_hint;
    result.last_hint = best->last_hint;
  }
  return result;
}

}  // namespace kinosynth
