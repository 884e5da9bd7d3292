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

// Experimental k-descent: follow improving Δk directions from a starting
// certificate. Not used by SolveShortest.

#include <algorithm>
#include <cmath>

#include "kinosynth/errors.hpp"
#include "kinosynth/solver.hpp"
#include "kinosynth/switching.hpp"

namespace kinosynth {
namespace {

constexpr int kMaxIterations = 50;

struct Probe {
  ExtremalCertificate cert;
  ExtremalRollout rollout;
  bool ok = false;
};

// Rescales (k, c) so the best control at the start holds H = 1.
bool Normalize(const Pose& q, const ControlSet& u, const Vec3& goal,
               ExtremalCertificate* cert) {
  double best = -1.0;
  for (int i = 0; i < u.size(); ++i) {
    best = std::max(best, HamiltonianValue(*cert, q, u[i], goal));
  }
  if (!(best > 1e-12) || !std::isfinite(best)) return false;
  cert->k /= best;
  cert->c /= best;
  return true;
}

Probe Run(const ExtremalCertificate& cert, const Pose& q_s, const Pose& q_g,
          const ControlSet& u, const SolverParams& params, double horizon) {
  Probe p;
  p.cert = cert;
  try {
    RolloutOptions opts;
    opts.touch_tol = IsPlanarProblem(q_s, q_g, u) ? params.touch_tol_planar
                                                  : params.touch_tol_spatial;
    p.rollout = ExtremalTrajectory(cert, q_s, u, q_g, params.max_segments,
                                   horizon, opts);
    p.ok = true;
  } catch (const Error&) {
  }
  return p;
}

}  // namespace

DescentResult ExperimentalDescent(const PointConfiguration& qs,
                                  const PointConfiguration& qg,
                                  const ControlSet& u,
                                  const ExtremalCertificate& cert0,
                                  const SolverParams& params) {
  const Pose q_s = ToPose(qs), q_g = ToPose(qg);
  const Vec3& g = q_g.position;
  double max_period = 0.0;
  for (int i = 0; i < u.size(); ++i) {
    if (u[i].is_rotation()) max_period = std::max(max_period, u[i].Period());
  }
  const double horizon =
      2.0 * (q_s.position - g).norm() + 3.0 * std::max(max_period, 1.0);

  DescentResult out;
  ExtremalCertificate cert = cert0;
  if (!Normalize(q_s, u, g, &cert)) {
    throw Error(ErrorCode::kAmbiguousExtremal, "no control holds H > 0 at start");
  }
  Probe best = Run(cert, q_s, q_g, u, params, horizon);
  if (!best.ok) {
    throw Error(ErrorCode::kAmbiguousExtremal, "initial certificate rolls out nowhere");
  }
  double step = 0.1;
  while (best.rollout.closest_error > params.eps_goal &&
         out.iterations < kMaxIterations) {
    // Moments of the controls active at the start and of the control
    // that arrives at the goal.
    std::vector<Vec3> moments;
    double top = -1e300;
    for (int i = 0; i < u.size(); ++i) {
      top = std::max(top, HamiltonianValue(best.cert, q_s, u[i], g));
    }
    for (int i = 0; i < u.size(); ++i) {
      if (HamiltonianValue(best.cert, q_s, u[i], g) >= top - 1e-6) {
        moments.push_back(ComputeControlMoment(q_s, u[i], g).moment);
      }
    }
    const auto& segs = best.rollout.truncated.segments();
    if (!segs.empty()) {
      moments.push_back(ComputeControlMoment(q_g, u[segs.back().control], g).moment);
    }
    const auto imp = ImprovingDeltaK(best.cert.k, moments);
    if (!imp) {
      out.converged = true;
      break;
    }
    ++out.iterations;
    bool moved = false;
    while (step > 1e-9) {
      ExtremalCertificate trial = best.cert;
      trial.k += step * std::max(1.0, trial.k.norm()) * imp->delta_k;
      if (Normalize(q_s, u, g, &trial)) {
        Probe p = Run(trial, q_s, q_g, u, params, horizon);
        if (p.ok && p.rollout.closest_error < best.rollout.closest_error) {
          best = std::move(p);
          step = std::min(1.0, step * 1.5);
          moved = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!moved) break;
  }
  if (best.rollout.closest_error <= params.eps_goal) out.converged = true;

  SolveResult& r = out.result;
  std::vector<Segment> segs = best.rollout.truncated.segments();
  double err = best.rollout.closest_error;
  if (err > params.eps_goal && !segs.empty()) {
    std::vector<Segment> polished = segs;
    const double e = PolishDurations(q_s, q_g, u, &polished);
    if (e < err) {
      segs = polished;
      err = e;
    }
  }
  r.trajectory = Trajectory(segs, params.eps_seg);
  r.total_time = r.trajectory.total_time();
  r.goal_error = err;
  r.certificate = best.cert;
  r.report = VerifyNecessaryCondition(best.cert, q_s, r.trajectory, u, g,
                                      params.violation_tol);
  r.verified = err <= params.eps_goal &&
               r.report.max_violation_by_inactive <= params.violation_tol;
  return out;
}

}  // namespace kinosynth
