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

// Exhaustive reference solver. Deliberately shares nothing with the extremal
// search beyond forward simulation: durations come from a grid and are then
// refined by cyclic coordinate descent.

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "kinosynth/errors.hpp"
#include "kinosynth/solver.hpp"

namespace kinosynth {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kSeedsPerWord = 6;
constexpr long kGridBudget = 2000000;  // grid points per word
constexpr int kMaxSweeps = 4000;

struct Xform {
  Mat3 r;
  Vec3 t;
};

Xform ToXform(const BodyTransform& b) { return {b.rotation.matrix(), b.translation}; }

class WordProblem {
 public:
  WordProblem(const Pose& q_s, const Pose& q_g, const ControlSet& u,
              std::vector<int> word)
      : q_s_(q_s), q_g_(q_g), u_(u), word_(std::move(word)) {
    g_[0] = q_g.position;
    g_[1] = q_g.position + q_g.rotation.dx();
    g_[2] = q_g.position + q_g.rotation.dy();
  }

  // Squared three-point miss; smooth, so coordinate descent behaves.
  double Squared(const std::vector<double>& t) const {
    Vec3 p = q_s_.position;
    Mat3 r = q_s_.rotation.matrix();
    for (size_t i = 0; i < word_.size(); ++i) {
      const Xform x = ToXform(ControlTransform(u_[word_[i]], std::max(t[i], 0.0)));
      p += r * x.t;
      r = r * x.r;
    }
    return Miss(p, r);
  }

  double Miss(const Vec3& p, const Mat3& r) const {
    return (p - g_[0]).squaredNorm() + (p + r.col(0) - g_[1]).squaredNorm() +
           (p + r.col(1) - g_[2]).squaredNorm();
  }

  double Error(const std::vector<double>& t) const {
    Vec3 p = q_s_.position;
    Mat3 r = q_s_.rotation.matrix();
    for (size_t i = 0; i < word_.size(); ++i) {
      const Xform x = ToXform(ControlTransform(u_[word_[i]], std::max(t[i], 0.0)));
      p += r * x.t;
      r = r * x.r;
    }
    return (p - g_[0]).norm() + (p + r.col(0) - g_[1]).norm() +
           (p + r.col(1) - g_[2]).norm();
  }

  const std::vector<int>& word() const { return word_; }
  const ControlSet& controls() const { return u_; }
  const Pose& start() const { return q_s_; }

 private:
  Pose q_s_, q_g_;
  const ControlSet& u_;
  std::vector<int> word_;
  Vec3 g_[3];
};

struct GridSeed {
  double miss;
  std::vector<int> cell;
};

// Full grid walk, composing cached per-step transforms.
std::vector<GridSeed> GridSeeds(const WordProblem& wp,
                                const std::vector<std::vector<Xform>>& steps,
                                const std::vector<int>& counts) {
  const int n = static_cast<int>(counts.size());
  std::vector<std::pair<double, long>> all;
  long flat = 0;
  std::vector<int> idx(n, 0);
  std::vector<Vec3> ps(n + 1);
  std::vector<Mat3> rs(n + 1);
  ps[0] = wp.start().position;
  rs[0] = wp.start().rotation.matrix();
  int depth = 0;
  // Iterative depth-first walk; prefix transforms are reused.
  while (depth >= 0) {
    if (depth == n) {
      all.emplace_back(wp.Miss(ps[n], rs[n]), flat++);
      --depth;
      if (depth >= 0) ++idx[depth];
      continue;
    }
    if (idx[depth] >= counts[depth]) {
      idx[depth] = 0;
      --depth;
      if (depth >= 0) ++idx[depth];
      continue;
    }
    const Xform& x = steps[depth][idx[depth]];
    ps[depth + 1] = ps[depth] + rs[depth] * x.t;
    rs[depth + 1] = rs[depth] * x.r;
    ++depth;
  }
  // Walk order is lexicographic in the cell index, so `flat` decodes back.
  const size_t keep = std::min<size_t>(all.size(), 4096);
  std::partial_sort(all.begin(), all.begin() + keep, all.end());
  // Keep a few well-separated seeds.
  std::vector<GridSeed> kept;
  for (size_t a = 0; a < keep; ++a) {
    GridSeed s{all[a].first, std::vector<int>(n)};
    long rest = all[a].second;
    for (int i = n - 1; i >= 0; --i) {
      s.cell[i] = static_cast<int>(rest % counts[i]);
      rest /= counts[i];
    }
    bool near = false;
    for (const GridSeed& k : kept) {
      int dist = 0;
      for (int i = 0; i < n; ++i) {
        int d = std::abs(s.cell[i] - k.cell[i]);
        if (wp.controls()[wp.word()[i]].is_rotation()) {
          d = std::min(d, counts[i] - d);
        }
        dist = std::max(dist, d);
      }
      if (dist <= 2) {
        near = true;
        break;
      }
    }
    if (!near) kept.push_back(s);
    if (static_cast<int>(kept.size()) == kSeedsPerWord) break;
  }
  return kept;
}

// Minimizes f(x + a·d) over a in [lo, hi].
template <typename F>
double Golden(const F& f, double lo, double hi, double* best_val) {
  constexpr double kRatio = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - kRatio * (b - a), d = a + kRatio * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 80 && b - a > 1e-14 * (1.0 + std::abs(a)); ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kRatio * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kRatio * (b - a);
      fd = f(d);
    }
  }
  if (fc < fd) {
    *best_val = fc;
    return c;
  }
  *best_val = fd;
  return d;
}

// Cyclic coordinate descent with a pattern move after each sweep.
std::vector<double> Descend(const WordProblem& wp, std::vector<double> t,
                            double step, double eps_goal) {
  const int n = static_cast<int>(t.size());
  double f = wp.Squared(t);
  std::vector<double> h(n, step);
  const double target = (eps_goal * 1e-3) * (eps_goal * 1e-3);
  for (int sweep = 0; sweep < kMaxSweeps && f > target; ++sweep) {
    const std::vector<double> before = t;
    const double f_before = f;
    for (int i = 0; i < n; ++i) {
      auto along = [&](double v) {
        std::vector<double> x = t;
        x[i] = v;
        return wp.Squared(x);
      };
      double val;
      const double lo = std::max(0.0, t[i] - h[i]);
      const double v = Golden(along, lo, t[i] + h[i], &val);
      if (val < f) {
        h[i] = std::max(2.0 * std::abs(v - t[i]), 1e-12);
        t[i] = v;
        f = val;
      } else {
        h[i] = std::max(0.5 * h[i], 1e-12);
      }
    }
    // Pattern move along the sweep's net displacement.
    std::vector<double> dir(n);
    double norm = 0.0;
    for (int i = 0; i < n; ++i) {
      dir[i] = t[i] - before[i];
      norm += dir[i] * dir[i];
    }
    if (norm > 0.0) {
      auto along = [&](double a) {
        std::vector<double> x = t;
        for (int i = 0; i < n; ++i) x[i] = std::max(0.0, x[i] + a * dir[i]);
        return wp.Squared(x);
      };
      double val;
      const double a = Golden(along, 0.0, 8.0, &val);
      if (val < f) {
        for (int i = 0; i < n; ++i) t[i] = std::max(0.0, t[i] + a * dir[i]);
        f = val;
      }
    }
    if (f >= f_before * (1.0 - 1e-12) &&
        *std::max_element(h.begin(), h.end()) <= 1e-12) {
      break;
    }
  }
  return t;
}

void AllWords(int m, int len, std::vector<int>* prefix,
              std::vector<std::vector<int>>* out) {
  if (static_cast<int>(prefix->size()) == len) {
    out->push_back(*prefix);
    return;
  }
  for (int c = 0; c < m; ++c) {
    if (!prefix->empty() && prefix->back() == c) continue;
    prefix->push_back(c);
    AllWords(m, len, prefix, out);
    prefix->pop_back();
  }
}

}  // namespace

SolveResult BruteForceOracle(const PointConfiguration& qs,
                             const PointConfiguration& qg, const ControlSet& u,
                             int max_segments, double duration_grid,
                             double eps_goal) {
  if (max_segments < 1 || max_segments > 5) {
    throw Error(ErrorCode::kInvalidInput, "oracle max_segments must be in [1, 5]");
  }
  if (!(duration_grid > 0.0)) {
    throw Error(ErrorCode::kInvalidInput, "oracle duration_grid must be positive");
  }
  const Pose q_s = ToPose(qs), q_g = ToPose(qg);
  SolveResult best;
  best.total_time = kInf;
  if (PointError(qs, qg) <= eps_goal) {
    best.total_time = 0.0;
    best.goal_error = PointError(qs, qg);
    best.verified = true;
    return best;
  }
  double reach = 0.0;
  for (const Control& c : u.controls()) {
    if (c.is_rotation()) reach = std::max(reach, c.center.norm());
  }
  const double dist = (q_g.position - q_s.position).norm();

  for (int len = 1; len <= max_segments; ++len) {
    std::vector<std::vector<int>> words;
    std::vector<int> prefix;
    AllWords(u.size(), len, &prefix, &words);
    for (const std::vector<int>& word : words) {
      WordProblem wp(q_s, q_g, u, word);
      // Per-position grids: a full turn for rotations, a generous reach for
      // translations.
      std::vector<double> spans(len);
      for (int i = 0; i < len; ++i) {
        const Control& c = u[word[i]];
        spans[i] = c.is_rotation() ? c.Period()
                                   : (dist + 4.0 * reach + 1.0) / c.v.norm();
      }
      const double per_dim = std::pow(static_cast<double>(kGridBudget), 1.0 / len);
      std::vector<int> counts(len);
      std::vector<double> deltas(len);
      std::vector<std::vector<Xform>> steps(len);
      for (int i = 0; i < len; ++i) {
        counts[i] = std::max(
            2, static_cast<int>(std::min(std::ceil(spans[i] / duration_grid), per_dim)));
        deltas[i] = spans[i] / counts[i];
        for (int j = 0; j < counts[i]; ++j) {
          steps[i].push_back(ToXform(ControlTransform(u[word[i]], j * deltas[i])));
        }
      }
      for (const GridSeed& seed : GridSeeds(wp, steps, counts)) {
        std::vector<double> t(len);
        for (int i = 0; i < len; ++i) t[i] = seed.cell[i] * deltas[i];
        double step = *std::max_element(deltas.begin(), deltas.end());
        t = Descend(wp, t, step, eps_goal);
        // Whole extra turns never help; fold them away and re-check.
        for (int i = 0; i < len; ++i) {
          const Control& c = u[word[i]];
          if (c.is_rotation()) t[i] = std::fmod(t[i], c.Period());
        }
        const double err = wp.Error(t);
        if (err > eps_goal) continue;
        double total = 0.0;
        for (double x : t) total += x;
        if (total < best.total_time - 1e-12) {
          std::vector<Segment> segs;
          for (int i = 0; i < len; ++i) segs.push_back({word[i], t[i]});
          best.trajectory = Trajectory(segs, 1e-9);
          best.total_time = total;
          best.goal_error = err;
        }
      }
    }
  }
  if (!std::isfinite(best.total_time)) {
    throw Error(ErrorCode::kNoPathFound, "oracle found no word reaching the goal");
  }
  best.verified = false;  // no certificate
  return best;
}

}  // namespace kinosynth
