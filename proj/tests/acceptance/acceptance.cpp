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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "kinosynth/control.hpp"
#include "kinosynth/dubins.hpp"
#include "kinosynth/errors.hpp"
#include "kinosynth/extremal.hpp"
#include "kinosynth/geometry.hpp"
#include "kinosynth/solver.hpp"
#include "kinosynth/switching.hpp"
#include "kinosynth/synthesis.hpp"

namespace {

using namespace kinosynth;
using Clock = std::chrono::steady_clock;

constexpr double kPi = 3.14159265358979323846;

int failures = 0;

void Report(const char* id, bool pass, const std::string& detail) {
  std::printf("[%s] %s %s\n", pass ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string F(const char* fmt, ...) __attribute__((format(printf, 1, 2)));
std::string F(const char* fmt, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, fmt);
  std::vsnprintf(buf, sizeof(buf), fmt, ap);
  va_end(ap);
  return buf;
}

double Seconds(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Instance {
  PlanarState start, goal;
};

std::vector<Instance> RandomPairs(int n, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> xy(-5.0, 5.0), th(0.0, 2.0 * kPi);
  std::vector<Instance> out;
  for (int i = 0; i < n; ++i) {
    Instance in;
    in.start = {xy(rng), xy(rng), th(rng)};
    in.goal = {xy(rng), xy(rng), th(rng)};
    out.push_back(in);
  }
  return out;
}

Pose ToPose(const PlanarState& s) { return Pose::Planar(s.x, s.y, s.theta); }

struct Solved {
  Instance instance;
  SolveResult result;
  bool ok = false;
};

// Random spatial control set: translations and rotations about random axes.
ControlSet RandomSpatialSet(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> w(0.5, 2.0), c(-2.0, 2.0);
  std::vector<Control> cs;
  cs.push_back(Control::Translation(Vec3(n(rng), n(rng), n(rng))));
  for (int i = 0; i < 3; ++i) {
    const Vec3 axis = Vec3(n(rng), n(rng), n(rng)).normalized();
    cs.push_back(Control::Rotation(axis, Vec3(c(rng), c(rng), c(rng)),
                                   (i % 2 ? -1.0 : 1.0) * w(rng)));
  }
  return ControlSet(cs);
}

Pose RandomPose(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> a(0.0, 2.0 * kPi), p(-3.0, 3.0);
  Pose q;
  q.position = Vec3(p(rng), p(rng), p(rng));
  q.rotation = AxisAngleRotation(Vec3(n(rng), n(rng), n(rng)).normalized(), a(rng));
  return q;
}

// h(q, k) = k·(ω̂ × (g − r)) − 1 for rotations, k·(R v) − 1 for
// translations, written out independently of the library.
double ConstraintH(const Vec3& k, const Control& u, const Vec3& p,
                   const Mat3& r, const Vec3& g) {
  if (u.is_translation()) return k.dot(r * u.v) - 1.0;
  const Vec3 w = r * (u.omega * u.axis);
  const Vec3 centre = p + r * u.center;
  return k.dot(w.cross(g - centre)) - 1.0;
}

}  // namespace

int main() {
  const auto t_all = Clock::now();
  const ControlSet dubins = DubinsControlSet();
  const Pose origin = Pose::Planar(0, 0, 0);

  // 1. Dubins equivalence on 100 random pairs.
  std::vector<Solved> solved;
  {
    const auto t0 = Clock::now();
    double worst = 0.0;
    int bad = 0;
    for (const Instance& in : RandomPairs(100, 20261014)) {
      Solved s;
      s.instance = in;
      const double ref = DubinsShortest(in.start, in.goal).length;
      try {
        s.result = SolveShortest(ToPose(in.start), ToPose(in.goal), dubins);
        s.ok = true;
        const double d = std::abs(s.result.total_time - ref);
        worst = std::max(worst, d);
        if (d > 1e-3) ++bad;
      } catch (const Error& e) {
        ++bad;
        worst = INFINITY;
      }
      solved.push_back(std::move(s));
    }
    const double secs = Seconds(t0);
    Report("C1 dubins-equivalence", bad == 0 && secs <= 300.0,
           F("100 pairs, mismatches=%d, max |dt|=%.3g (tol 1e-3), runtime %.1fs (limit 300s)",
             bad, worst, secs));
  }

  // 2. Boundary checkpoint at (1,1,0).
  {
    const SwitchClassification c =
        ClassifyConfiguration(Pose::Planar(1, 1, 0), dubins, origin);
    bool pass = c.verdict == Verdict::kOnCurve && c.cert && c.tangent;
    double angle = 180.0, kerr = INFINITY, cerr = INFINITY;
    if (pass) {
      kerr = std::max(std::abs(c.cert->k.x() - 1.0), std::abs(c.cert->k.y() - 1.0));
      cerr = c.cert->c.norm();
      // Circle centred (0,1) through (1,1): radial (1,0), tangent (0,±1).
      const Vec3 tangent(0.0, 1.0, 0.0);
      angle = std::acos(std::min(1.0, std::abs(c.tangent->dot(tangent)))) * 180.0 / kPi;
      pass = kerr <= 1e-9 && cerr <= 1e-9 && angle <= 5.0;
    }
    Report("C2 boundary-checkpoint", pass,
           F("verdict=%s |k-(1,1)|=%.2g |c|=%.2g tangent angle=%.3g deg (limit 5)",
             VerdictName(c.verdict), kerr, cerr, angle));
  }

  // 3. Stage-one failure at (0,1,0).
  {
    const auto k = FeasibleK(Pose::Planar(0, 1, 0), Hypothesis{1, 2, 2}, dubins, origin);
    Report("C3 stage1-failure", !k.has_value(),
           k ? "feasible_k unexpectedly returned a certificate"
             : "feasible_k({L,R,R@goal}) infeasible");
  }

  // 4. Interior checkpoint at (0.5,0.4,0).
  {
    const Pose q = Pose::Planar(0.5, 0.4, 0);
    const auto cert = FeasibleK(q, Hypothesis{0, 2, 2}, dubins, origin);
    const double kerr = cert ? (cert->k - Vec3(1.0, 0.8, 0.0)).norm() : INFINITY;
    const Vec3 bl = GradKConstraint(dubins[1], q, origin.position);
    const Vec3 br = GradKConstraint(dubins[2], q, origin.position);
    const double berr = std::max((bl - Vec3(1.4, -0.5, 0)).cwiseAbs().maxCoeff(),
                                 (br - Vec3(0.6, 0.5, 0)).cwiseAbs().maxCoeff());
    // The checked pair is (L, R) with bases (1.4,−0.5) and (0.6,0.5).
    double rel_err = INFINITY;
    const auto lr = FeasibleK(q, Hypothesis{1, 2, 2}, dubins, origin);
    if (lr) {
      const WeightRelation w = ComputeWeightRelation(q, Hypothesis{1, 2, 2}, dubins,
                                                     origin, *lr);
      rel_err = std::abs(w.beta - (-7.0 / 3.0) * w.alpha);
    } else {
      // Relation only needs d; use the S,R certificate when L,R is infeasible.
      const WeightRelation w = ComputeWeightRelation(q, Hypothesis{1, 2, 2}, dubins,
                                                     origin, cert ? *cert : ExtremalCertificate{});
      rel_err = std::abs(w.beta - (-7.0 / 3.0) * w.alpha);
    }
    const SwitchClassification c = ClassifyConfiguration(q, dubins, origin);
    const bool interior = c.verdict == Verdict::kInterior && c.first_hint == 2 &&
                          c.last_hint == 2;
    Report("C4 interior-checkpoint",
           kerr <= 1e-12 && berr <= 1e-12 && rel_err <= 1e-9 && interior,
           F("|k-(1,0.8,0)|=%.2g bases err=%.2g |beta+7/3 alpha|=%.2g verdict=%s first/last=%s/%s",
             kerr, berr, rel_err, VerdictName(c.verdict),
             c.first_hint >= 0 ? dubins.Label(c.first_hint).c_str() : "-",
             c.last_hint >= 0 ? dubins.Label(c.last_hint).c_str() : "-"));
  }

  // 5. Gradient identities vs central differences.
  {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> n(0.0, 1.0);
    const double h = 1e-6;
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
      const ControlSet u = trial % 4 == 0 ? dubins : RandomSpatialSet(rng);
      const Control& ctl = u[trial % u.size()];
      const Pose q = trial % 4 == 0 ? Pose::Planar(3 * n(rng), 3 * n(rng), n(rng))
                                    : RandomPose(rng);
      const Vec3 k(n(rng), n(rng), n(rng));
      const Vec3 g(n(rng), n(rng), n(rng));
      const Mat3 r = q.rotation.matrix();
      Vec3 fd_q, fd_k;
      for (int a = 0; a < 3; ++a) {
        const Vec3 e = h * Vec3::Unit(a);
        fd_q[a] = (ConstraintH(k, ctl, q.position + e, r, g) -
                   ConstraintH(k, ctl, q.position - e, r, g)) / (2 * h);
        fd_k[a] = (ConstraintH(k + e, ctl, q.position, r, g) -
                   ConstraintH(k - e, ctl, q.position, r, g)) / (2 * h);
      }
      const Vec3 an_q = GradQConstraint(k, ctl, q);
      const Vec3 an_k = GradKConstraint(ctl, q, g);
      worst = std::max(worst, (an_q - fd_q).norm() / std::max(1.0, fd_q.norm()));
      worst = std::max(worst, (an_k - fd_k).norm() / std::max(1.0, fd_k.norm()));
    }
    Report("C5 gradient-identities", worst <= 1e-6,
           F("200 triples (planar + random spatial sets), max relative error %.2g (tol 1e-6)",
             worst));
  }

  // 6. H constancy for every criterion-1 result.
  {
    double dev = 0.0, viol = 0.0;
    int count = 0;
    for (const Solved& s : solved) {
      if (!s.ok) continue;
      ++count;
      const PointConfiguration q0 = ConfigFromPose(ToPose(s.instance.start));
      const Vec3 goal = ToPose(s.instance.goal).position;
      const NecessaryConditionReport rep = VerifyNecessaryCondition(
          s.result.certificate, q0, s.result.trajectory, dubins, goal, 1e-6);
      dev = std::max(dev, rep.max_active_deviation);
      viol = std::max(viol, rep.max_violation_by_inactive);
      if (!s.result.trajectory.empty()) {
        for (double v : HProfile(s.result.certificate, q0, s.result.trajectory,
                                 dubins, goal, 64)) {
          dev = std::max(dev, std::abs(v - 1.0));
        }
      }
    }
    Report("C6 h-constancy", count == 100 && dev <= 1e-6 && viol <= 1e-6,
           F("%d results, max |H-1|=%.2g, max inactive excess=%.2g (tol 1e-6)", count,
             dev, viol));
  }

  // 7. Adjoint residuals.
  {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> n(0.0, 1.0);
    bool exact_zero = true;
    for (int trial = 0; trial < 200; ++trial) {
      const ControlSet u = RandomSpatialSet(rng);
      AdjointVector lambda;
      for (int i = 0; i < 9; ++i) lambda[i] = n(rng);
      const PointConfiguration q = ConfigFromPose(RandomPose(rng));
      const AdjointVector r = AdjointResiduals(lambda, q, u[trial % u.size()]);
      exact_zero = exact_zero && r[0] == 0.0 && r[1] == 0.0 && r[2] == 0.0;
    }
    double worst = 0.0;
    int used = 0;
    for (const Solved& s : solved) {
      if (!s.ok || s.result.trajectory.empty() || used == 20) continue;
      ++used;
      const AdjointFit fit =
          RecoverAdjoint(s.result.certificate.k, ConfigFromPose(ToPose(s.instance.start)),
                         s.result.trajectory, dubins, 32);
      worst = std::max(worst, fit.max_residual);
    }
    Report("C7 adjoint-residuals", exact_zero && used == 20 && worst <= 1e-9,
           F("entries 1-3 exactly zero: %s; %d solved extremals, max residual norm %.3g (tol 1e-9)",
             exact_zero ? "yes" : "no", used, worst));
  }

  // 8. Synthesis map fidelity.
  {
    const auto t0 = Clock::now();
    const MapBounds bounds{-4.0, 4.0, -4.0, 4.0};
    const SynthesisMap map =
        MapSlice(dubins, RotationMatrix::Identity(), bounds, 0.1, DefaultMapParams());
    const double secs = Seconds(t0);
    int interior = 0, agree = 0, unsolved = 0;
    for (const MapCell& c : map.cells) {
      if (!c.solved) ++unsolved;
      if (c.boundary) continue;
      ++interior;
      const DubinsLabel ref = DubinsRegionLabel({c.x, c.y, 0.0});
      const std::string mine = c.solved ? dubins.NamedWord(c.word) : "UNSOLVED";
      for (const std::string& w : ref.tied) {
        if (w == mine) {
          ++agree;
          break;
        }
      }
    }
    const double rate = interior ? static_cast<double>(agree) / interior : 0.0;
    // LSR/RSR switching curve: points within one cell of the circle (0,1).
    const std::string lsr = ControlSet::IndexWord(DubinsLettersToWord("LSR"));
    const std::string rsr = ControlSet::IndexWord(DubinsLettersToWord("RSR"));
    int lines = 0;
    double worst = 0.0;
    for (const BoundaryPolyline& line : map.curves) {
      const bool tagged = (line.label_a == lsr && line.label_b == rsr) ||
                          (line.label_a == rsr && line.label_b == lsr);
      if (!tagged) continue;
      ++lines;
      for (const Vec3& p : line.points) {
        worst = std::max(worst, std::abs((p - Vec3(0, 1, 0)).norm() - 1.0));
      }
    }
    const bool curve_ok = lines > 0 && worst <= map.resolution;
    Report("C8 synthesis-map", rate >= 0.98 && curve_ok && secs <= 600.0,
           F("%dx%d cells, non-boundary agreement %.4f (%d/%d, need 0.98), unsolved=%d; "
             "LSR/RSR polylines=%d max circle distance=%.3g (limit %.2g); runtime %.1fs (limit 600s)",
             map.nx, map.ny, rate, agree, interior, unsolved, lines,
             lines ? worst : NAN, map.resolution, secs));
  }

  // 9. Bellman suffix property.
  {
    int paths = 0, suffixes = 0, bad = 0;
    double worst = 0.0;
    for (const Solved& s : solved) {
      if (!s.ok || s.result.trajectory.size() < 2 || paths == 20) continue;
      ++paths;
      const auto& segs = s.result.trajectory.segments();
      Pose q = ToPose(s.instance.start);
      double remaining = s.result.total_time;
      for (size_t i = 0; i + 1 < segs.size(); ++i) {
        q = Advance(q, dubins[segs[i].control], segs[i].duration);
        remaining -= segs[i].duration;
        ++suffixes;
        try {
          const SolveResult r = SolveShortest(q, ToPose(s.instance.goal), dubins);
          const double d = std::abs(r.total_time - remaining);
          worst = std::max(worst, d);
          if (d > 1e-3) ++bad;
        } catch (const Error&) {
          ++bad;
        }
      }
    }
    Report("C9 bellman-suffix", paths == 20 && bad == 0,
           F("%d paths, %d suffixes, failures=%d, max |dt|=%.3g (tol 1e-3)", paths,
             suffixes, bad, worst));
  }

  // 10. Brute-force oracle never beats the solver.
  {
    const auto t0 = Clock::now();
    int beaten = 0, compared = 0;
    double margin = INFINITY;
    for (const Instance& in : RandomPairs(30, 31)) {
      const PointConfiguration qs = ConfigFromPose(ToPose(in.start));
      const PointConfiguration qg = ConfigFromPose(ToPose(in.goal));
      double solver_time;
      try {
        solver_time = SolveShortest(qs, qg, dubins).total_time;
      } catch (const Error&) {
        ++beaten;
        continue;
      }
      try {
        const SolveResult o = BruteForceOracle(qs, qg, dubins, 3, 0.1);
        ++compared;
        margin = std::min(margin, o.total_time - solver_time);
        if (o.total_time < solver_time - 1e-3) ++beaten;
      } catch (const Error&) {
        // Nothing found by the oracle cannot beat the solver.
      }
    }
    Report("C10 oracle-floor", beaten == 0,
           F("30 instances, %d compared, oracle better by >1e-3 on %d, min(oracle-solver)=%.3g, %.1fs",
             compared, beaten, margin, Seconds(t0)));
  }

  std::printf("%s: %d failing criteria, %.1fs total\n", failures ? "FAILED" : "OK",
              failures, Seconds(t_all));
  return failures ? 1 : 0;
}
