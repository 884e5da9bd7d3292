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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "kinosynth/errors.hpp"
#include "kinosynth/kernels.hpp"
#include "kinosynth/solver.hpp"

namespace kinosynth {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();
// Crossings closer than this to the segment start belong to the switch that
// just happened.
constexpr double kSimultaneous = 1e-9;
constexpr double kMinStep = 1e-10;
// Tangential roots are only located to about sqrt(machine eps).
constexpr double kTangentSnap = 1e-6;

void PosePoints(const Pose& p, double out[9]) {
  const Vec3 pts[3] = {p.position, p.position + p.rotation.dx(),
                       p.position + p.rotation.dy()};
  for (int i = 0; i < 3; ++i) {
    for (int d = 0; d < 3; ++d) out[3 * i + d] = pts[i][d];
  }
}

double ErrorAt(const Pose& p, const double goal[9]) {
  double pts[9];
  PosePoints(p, pts);
  double total = 0.0;
  for (int i = 0; i < 3; ++i) {
    total += std::sqrt(std::pow(pts[3 * i] - goal[3 * i], 2) +
                       std::pow(pts[3 * i + 1] - goal[3 * i + 1], 2) +
                       std::pow(pts[3 * i + 2] - goal[3 * i + 2], 2));
  }
  return total;
}

struct Closest {
  int segment = -1;  // -1: the start pose itself
  double s = 0.0;
  double error = kInf;
};

// Minimum goal error along one segment: batched samples, then a golden
// section refine around the best sample.
void TrackClosest(const Pose& q, const Control& a, double duration,
                  const double goal[9], int segment, Closest* best) {
  if (duration <= 0.0) return;
  int n = 16;
  if (a.is_rotation()) {
    n = static_cast<int>(std::ceil(64.0 * duration / a.Period()));
    n = std::clamp(n, 8, 4096);
  }
  const int count = n + 1;
  std::vector<double> buf(12 * count);
  double* cols[9];
  for (int i = 0; i < 9; ++i) cols[i] = buf.data() + i * count;
  double* cos_t = buf.data() + 9 * count;
  double* sin_t = buf.data() + 10 * count;
  double* err = buf.data() + 11 * count;
  const kernels::KernelTable& k = kernels::Active();

  double start[9];
  PosePoints(q, start);
  if (a.is_rotation()) {
    const Vec3 axis = q.rotation * a.axis;
    const Vec3 r = q.position + q.rotation * a.center;
    for (int i = 0; i < count; ++i) {
      const double psi = a.omega * duration * i / n;
      cos_t[i] = std::cos(psi);
      sin_t[i] = std::sin(psi);
    }
    for (int p = 0; p < 3; ++p) {
      const Vec3 d = Vec3(start[3 * p], start[3 * p + 1], start[3 * p + 2]) - r;
      const Vec3 along = d.dot(axis) * axis;
      kernels::ArcBasis arc;
      const Vec3 base = r + along, ca = d - along, cb = axis.cross(d);
      for (int j = 0; j < 3; ++j) {
        arc.base[j] = base[j];
        arc.a[j] = ca[j];
        arc.b[j] = cb[j];
      }
      k.rotate_points(arc, cos_t, sin_t, count, cols[3 * p], cols[3 * p + 1],
                      cols[3 * p + 2]);
    }
  } else {
    const Vec3 v = q.rotation * a.v;
    for (int i = 0; i < count; ++i) {
      const double s = duration * i / n;
      for (int p = 0; p < 3; ++p) {
        for (int j = 0; j < 3; ++j) cols[3 * p + j][i] = start[3 * p + j] + v[j] * s;
      }
    }
  }
  kernels::ConstPointsSoA pts;
  for (int i = 0; i < 9; ++i) pts.p[i] = cols[i];
  k.point_error(pts, goal, count, err);
  const int arg = static_cast<int>(std::min_element(err, err + count) - err);
  double lo = duration * std::max(arg - 1, 0) / n;
  double hi = duration * std::min(arg + 1, n) / n;
  auto f = [&](double s) { return ErrorAt(Advance(q, a, s), goal); };
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 60 && hi - lo > 1e-15; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = f(x2);
    }
  }
  double s_best = duration * arg / n, e_best = err[arg];
  if (f1 < e_best) {
    s_best = x1;
    e_best = f1;
  }
  if (f2 < e_best) {
    s_best = x2;
    e_best = f2;
  }
  if (e_best < best->error) *best = Closest{segment, s_best, e_best};
}

Control Reversed(const Control& u) {
  Control r = u;
  if (r.is_translation()) {
    r.v = -r.v;
  } else {
    r.omega = -r.omega;
  }
  return r;
}

// Rotation angle about `axis` (world, unit) that best maps `from` onto `to`.
double BestAngle(const RotationMatrix& from, const RotationMatrix& to,
                 const Vec3& axis) {
  const Mat3 m = to.matrix() * from.matrix().transpose();
  Mat3 k;
  k << 0, -axis.z(), axis.y(), axis.z(), 0, -axis.x(), -axis.y(), axis.x(), 0;
  // tr(Rot(ψ)ᵀ M) = cos ψ (tr M − aᵀMa) + sin ψ tr(Kᵀ M) + aᵀMa
  const double cos_coef = m.trace() - axis.dot(m * axis);
  const double sin_coef = (k.transpose() * m).trace();
  return std::atan2(sin_coef, cos_coef);
}

struct SingularExit {
  bool valid = false;
  double tau = 0.0;
  int last = -1;
  double s = 0.0;
  double miss = kInf;
};

// Leaves a singular translation arc at the point from which one rotation
// (or none) lands exactly on the goal orientation and, ideally, position.
SingularExit GoalDirectedExit(const Pose& q, const Control& a,
                              const ControlSet& u, const Pose& goal) {
  SingularExit best;
  const Vec3 v = q.rotation * a.v;
  const double vv = v.squaredNorm();
  auto consider = [&](const Pose& before, int last, double s) {
    if ((before.rotation.matrix() - q.rotation.matrix()).norm() > 1e-6) return;
    const Vec3 d = before.position - q.position;
    const double tau = v.dot(d) / vv;
    if (tau < -1e-12) return;
    const double miss = (d - tau * v).norm();
    if (miss < best.miss) best = SingularExit{true, std::max(tau, 0.0), last, s, miss};
  };
  consider(goal, -1, 0.0);
  for (int l = 0; l < u.size(); ++l) {
    const Control& c = u[l];
    if (!c.is_rotation()) continue;
    const Vec3 w = goal.rotation * c.axis;
    // Rotating by +ω s maps q's orientation to the goal's.
    double psi = BestAngle(q.rotation, goal.rotation, w);
    psi = c.omega > 0 ? WrapTwoPi(psi) : WrapTwoPi(-psi);
    const double s = psi / std::abs(c.omega);
    consider(Advance(goal, Reversed(c), s), l, s);
  }
  return best;
}

// Orders simultaneous events: translations first, then steeper rise, then
// lower index.
bool Earlier(double s_a, int a, double slope_a, double s_b, int b,
             double slope_b, const ControlSet& u) {
  const double tol = 1e-12 * (1.0 + std::abs(s_a));
  if (std::abs(s_a - s_b) > tol) return s_a < s_b;
  if (u[a].is_translation() != u[b].is_translation()) return u[a].is_translation();
  if (std::abs(slope_a - slope_b) > 1e-12) return slope_a > slope_b;
  return a < b;
}

int PickInitial(const ExtremalCertificate& cert, const Pose& q,
                const ControlSet& u, const Vec3& g) {
  std::vector<double> h(u.size());
  double top = -kInf;
  for (int j = 0; j < u.size(); ++j) {
    h[j] = HamiltonianValue(cert, q, u[j], g);
    top = std::max(top, h[j]);
  }
  if (!std::isfinite(top) || top <= 1e-12) {
    throw Error(ErrorCode::kAmbiguousExtremal,
                "no control has a positive Hamiltonian at the start");
  }
  std::vector<int> tied;
  for (int j = 0; j < u.size(); ++j) {
    if (h[j] >= top - 1e-9 * std::max(1.0, std::abs(top))) tied.push_back(j);
  }
  if (tied.size() == 1) return tied[0];
  // A translation along which every tied rotation stays flat is a
  // persistent singular arc: take it.
  for (int a : tied) {
    if (!u[a].is_translation()) continue;
    bool flat = true;
    for (int j : tied) {
      if (j == a) continue;
      flat = flat && std::abs(HAlongSegment(cert, q, u[a], u[j], g).Slope(0)) <= 1e-9;
    }
    if (flat) return a;
  }
  // Otherwise the lowest-index control that no tied control overtakes.
  for (int a : tied) {
    bool ok = true;
    for (int j : tied) {
      if (j == a) continue;
      ok = ok && HAlongSegment(cert, q, u[a], u[j], g).Slope(0) <= 1e-12;
    }
    if (ok) return a;
  }
  throw Error(ErrorCode::kAmbiguousExtremal,
              "tied controls at the start cannot be separated");
}

// Several controls reach the active level at once. Look one step ahead: a
// translation that keeps every tied control flat is a singular arc;
// otherwise the lowest-index control that nobody overtakes.
int ResolveSwitch(const ExtremalCertificate& cert, const Pose& q,
                  const ControlSet& u, const Vec3& g,
                  const std::vector<int>& tied, int previous, int fallback) {
  std::vector<int> all = tied;
  all.push_back(previous);
  auto slopes_ok = [&](int a, double limit, bool two_sided) {
    for (int j : all) {
      if (j == a) continue;
      const double slope = HAlongSegment(cert, q, u[a], u[j], g).Slope(0);
      if (two_sided ? std::abs(slope) > limit : slope > limit) return false;
    }
    return true;
  };
  for (int a : tied) {
    if (u[a].is_translation() && slopes_ok(a, 1e-9, true)) return a;
  }
  std::vector<int> order = tied;
  std::sort(order.begin(), order.end());
  for (int a : order) {
    if (slopes_ok(a, 1e-9, false)) return a;
  }
  return fallback;
}

}  // namespace

ExtremalRollout ExtremalTrajectory(const ExtremalCertificate& cert,
                                   const Pose& q0, const ControlSet& u,
                                   const Pose& goal, int max_segments,
                                   double max_time,
                                   const RolloutOptions& opts) {
  if (max_segments < 1 || !(max_time > 0.0)) {
    throw Error(ErrorCode::kInvalidInput, "rollout budget must be positive");
  }
  if (!cert.Valid()) {
    throw Error(ErrorCode::kAmbiguousExtremal, "certificate is degenerate");
  }
  const Vec3& g = goal.position;
  double goal_pts[9];
  PosePoints(goal, goal_pts);

  ExtremalRollout out;
  std::vector<Segment> segs;
  Pose q = q0;
  double t = 0.0;
  Closest best{-1, 0.0, opts.track_goal ? ErrorAt(q0, goal_pts) : kInf};
  int active = opts.first_control >= 0 ? opts.first_control
                                       : PickInitial(cert, q0, u, g);
  auto push = [&](int c, double d) {
    if (opts.track_goal) TrackClosest(q, u[c], d, goal_pts, static_cast<int>(segs.size()), &best);
    segs.push_back({c, d});
    q = Advance(q, u[c], d);
    t += d;
  };

  while (true) {
    if (static_cast<int>(segs.size()) >= max_segments) {
      out.partial = true;
      break;
    }
    const double remaining = max_time - t;
    if (remaining <= 0.0) {
      out.partial = true;
      break;
    }
    const Control& a = u[active];
    const double level = HamiltonianValue(cert, q, a, g);
    const double tol = opts.touch_tol * std::max(1.0, std::abs(level));

    std::vector<HCurve> curves(u.size());
    for (int j = 0; j < u.size(); ++j) {
      if (j != active) curves[j] = HAlongSegment(cert, q, a, u[j], g);
    }

    if (a.is_translation() && opts.track_goal) {
      bool singular = false;
      for (int j = 0; j < u.size(); ++j) {
        if (j == active || !u[j].is_rotation()) continue;
        singular = singular || (std::abs(curves[j].At(0) - level) <= tol &&
                                std::abs(curves[j].b) <= tol);
      }
      if (singular) {
        const SingularExit ex = GoalDirectedExit(q, a, u, goal);
        if (ex.valid && ex.tau <= remaining) {
          push(active, ex.tau);
          if (ex.last >= 0 && ex.s > 0.0 &&
              static_cast<int>(segs.size()) < max_segments) {
            push(ex.last, std::min(ex.s, max_time - t));
          }
          break;
        }
      }
    }

    struct Event {
      double s;
      int j;
      double slope;
    };
    std::vector<Event> events;
    for (int j = 0; j < u.size(); ++j) {
      if (j == active) continue;
      const HCurve& h = curves[j];
      double s = h.FirstUpCrossing(level, kMinStep, remaining);
      if (!h.affine) {
        // A curve peaking exactly at the level: a translation starts a
        // singular arc there. Any root found near such a peak is the same
        // tangency located only to ~sqrt(eps); snap it to the peak so
        // simultaneous touches stay simultaneous.
        const double amp = std::hypot(h.b, h.c);
        if (amp > 0.0 && std::abs(h.a + amp - level) <= tol) {
          const double delta = std::atan2(h.c, h.b);
          double n = std::ceil((h.rate * kMinStep - delta) / (2 * kPi));
          const double peak = (delta + 2 * kPi * n) / h.rate;
          const bool near = s >= 0.0 && std::abs(peak - s) <= kTangentSnap * (1.0 + s);
          if (peak <= remaining &&
              (near || (u[j].is_translation() && (s < 0.0 || peak < s)))) {
            s = peak;
          }
        }
      }
      if (s >= 0.0) events.push_back({s, j, h.Slope(s)});
    }
    if (events.empty()) {
      push(active, remaining);
      out.partial = true;
      break;
    }
    const Event* first = &events[0];
    for (const Event& e : events) {
      if (Earlier(e.s, e.j, e.slope, first->s, first->j, first->slope, u)) first = &e;
    }
    std::vector<int> tied;
    for (const Event& e : events) {
      if (e.s <= first->s + kSimultaneous * (1.0 + first->s)) tied.push_back(e.j);
    }
    const int previous = active;
    push(active, first->s);
    active = tied.size() == 1 ? first->j
                              : ResolveSwitch(cert, q, u, g, tied, previous, first->j);
  }

  out.trajectory = Trajectory(segs);
  out.closest_error = best.error;
  if (opts.track_goal && best.segment >= 0) {
    std::vector<Segment> cut(segs.begin(), segs.begin() + best.segment + 1);
    cut.back().duration = best.s;
    out.truncated = Trajectory(cut);
  }
  return out;
}

Trajectory ExtremalTrajectory(const ExtremalCertificate& cert,
                              const PointConfiguration& q0,
                              const ControlSet& u,
                              const PointConfiguration& goal,
                              int max_segments, double max_time,
                              double eps_goal) {
  const ExtremalRollout r = ExtremalTrajectory(
      cert, ToPose(q0), u, ToPose(goal), max_segments, max_time, {});
  // Stop at the goal when the extremal passes through it.
  if (r.closest_error <= eps_goal) return r.truncated;
  return r.trajectory;
}

}  // namespace kinosynth
