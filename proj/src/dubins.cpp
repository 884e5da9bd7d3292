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

#include "kinosynth/dubins.hpp"

#include <algorithm>
#include <cmath>

#include "kinosynth/geometry.hpp"

namespace kinosynth {

const char* DubinsTypeName(DubinsType t) {
  switch (t) {
    case DubinsType::kLSL: return "LSL";
    case DubinsType::kLSR: return "LSR";
    case DubinsType::kRSL: return "RSL";
    case DubinsType::kRSR: return "RSR";
    case DubinsType::kLRL: return "LRL";
    case DubinsType::kRLR: return "RLR";
  }
  return "?";
}

std::string DubinsWord::Canonical(double eps) const {
  const std::string letters = DubinsTypeName(type);
  const double params[3] = {t, p, q};
  std::string out;
  for (int i = 0; i < 3; ++i) {
    if (params[i] < eps) continue;
    if (!out.empty() && out.back() == letters[i]) continue;
    out += letters[i];
  }
  return out;
}

std::vector<DubinsWord> DubinsCandidates(const PlanarState& s,
                                         const PlanarState& g) {
  const double dx = g.x - s.x, dy = g.y - s.y;
  const double d = std::hypot(dx, dy);
  const double th = d > 0 ? std::atan2(dy, dx) : 0.0;
  const double a = WrapTwoPi(s.theta - th);
  const double b = WrapTwoPi(g.theta - th);
  const double sa = std::sin(a), sb = std::sin(b);
  const double ca = std::cos(a), cb = std::cos(b);
  const double cab = std::cos(a - b);

  std::vector<DubinsWord> out;
  auto add = [&](DubinsType type, double t, double p, double q) {
    out.push_back(DubinsWord{type, t, p, q, t + p + q});
  };

  double p2 = 2 + d * d - 2 * cab + 2 * d * (sa - sb);
  if (p2 >= 0) {
    const double tmp = std::atan2(cb - ca, d + sa - sb);
    add(DubinsType::kLSL, WrapTwoPi(-a + tmp), std::sqrt(p2), WrapTwoPi(b - tmp));
  }
  p2 = -2 + d * d + 2 * cab + 2 * d * (sa + sb);
  if (p2 >= 0) {
    const double p = std::sqrt(p2);
    const double tmp = std::atan2(-ca - cb, d + sa + sb) - std::atan2(-2.0, p);
    add(DubinsType::kLSR, WrapTwoPi(-a + tmp), p, WrapTwoPi(-b + tmp));
  }
  p2 = -2 + d * d + 2 * cab - 2 * d * (sa + sb);
  if (p2 >= 0) {
    const double p = std::sqrt(p2);
    const double tmp = std::atan2(ca + cb, d - sa - sb) - std::atan2(2.0, p);
    add(DubinsType::kRSL, WrapTwoPi(a - tmp), p, WrapTwoPi(b - tmp));
  }
  p2 = 2 + d * d - 2 * cab + 2 * d * (sb - sa);
  if (p2 >= 0) {
    const double tmp = std::atan2(ca - cb, d - sa + sb);
    add(DubinsType::kRSR, WrapTwoPi(a - tmp), std::sqrt(p2), WrapTwoPi(-b + tmp));
  }
  double c = (6 - d * d + 2 * cab + 2 * d * (sa - sb)) / 8;
  if (std::abs(c) <= 1) {
    const double p = WrapTwoPi(2 * M_PI - std::acos(c));
    const double t = WrapTwoPi(a - std::atan2(ca - cb, d - sa + sb) + p / 2);
    add(DubinsType::kRLR, t, p, WrapTwoPi(a - b - t + p));
  }
  c = (6 - d * d + 2 * cab + 2 * d * (sb - sa)) / 8;
  if (std::abs(c) <= 1) {
    const double p = WrapTwoPi(2 * M_PI - std::acos(c));
    const double t = WrapTwoPi(-a - std::atan2(ca - cb, d + sa - sb) + p / 2);
    add(DubinsType::kLRL, t, p, WrapTwoPi(b - a - t + p));
  }
  std::stable_sort(out.begin(), out.end(), [](const DubinsWord& x, const DubinsWord& y) {
    return static_cast<int>(x.type) < static_cast<int>(y.type);
  });
  return out;
}

DubinsWord DubinsShortest(const PlanarState& start, const PlanarState& goal) {
  const std::vector<DubinsWord> all = DubinsCandidates(start, goal);
  DubinsWord best = all.front();
  for (const DubinsWord& w : all) {
    if (w.length < best.length) best = w;
  }
  return best;
}

DubinsLabel DubinsRegionLabel(const PlanarState& q, double tie_tol) {
  const std::vector<DubinsWord> all = DubinsCandidates(q, PlanarState{});
  DubinsWord best = all.front();
  for (const DubinsWord& w : all) {
    if (w.length < best.length) best = w;
  }
  DubinsLabel label;
  label.word = best.Canonical();
  for (const DubinsWord& w : all) {
    if (w.length - best.length > tie_tol) continue;
    const std::string c = w.Canonical();
    if (std::find(label.tied.begin(), label.tied.end(), c) == label.tied.end()) {
      label.tied.push_back(c);
    }
  }
  std::sort(label.tied.begin(), label.tied.end());
  label.boundary = label.tied.size() > 1;
  return label;
}

std::vector<int> DubinsLettersToWord(const std::string& letters) {
  std::vector<int> w;
  for (char ch : letters) w.push_back(ch == 'S' ? 0 : ch == 'L' ? 1 : 2);
  return w;
}

Trajectory DubinsToTrajectory(const DubinsWord& w) {
  const std::vector<int> idx = DubinsLettersToWord(DubinsTypeName(w.type));
  return Trajectory({{idx[0], w.t}, {idx[1], w.p}, {idx[2], w.q}});
}

}  // namespace kinosynth
