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

#include "kinosynth/synthesis.hpp"

#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "kinosynth/dubins.hpp"
#include "kinosynth/errors.hpp"

namespace kinosynth {
namespace {

SynthesisMap Blank(int nx, int ny, double res) {
  SynthesisMap m;
  m.bounds = {0.0, (nx - 1) * res, 0.0, (ny - 1) * res};
  m.resolution = res;
  m.nx = nx;
  m.ny = ny;
  m.cells.resize(nx * ny);
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      MapCell& c = m.at(ix, iy);
      c.x = ix * res;
      c.y = iy * res;
      c.solved = true;
      c.word = {0};
    }
  }
  return m;
}

// Small Dubins map around the goal; shared because it takes a few seconds.
const SynthesisMap& SmallDubinsMap() {
  static const SynthesisMap map = MapSlice(DubinsControlSet(), RotationMatrix(),
                                           {0.0, 1.0, 0.0, 0.8}, 0.1, DefaultMapParams());
  return map;
}

TEST(ExtractBoundariesTest, HalfPlaneGivesOneStraightLine) {
  SynthesisMap m = Blank(10, 6, 0.1);
  for (MapCell& c : m.cells) {
    if (c.x > 0.45) c.word = {1};
  }
  FlagBoundaries(&m);
  const auto lines = ExtractBoundaries(m);
  ASSERT_EQ(lines.size(), 1u);
  EXPECT_EQ(lines[0].label_a, "0");
  EXPECT_EQ(lines[0].label_b, "1");
  EXPECT_EQ(lines[0].points.size(), 7u);
  for (const Vec3& p : lines[0].points) EXPECT_NEAR(p.x(), 0.45, 1e-12);
  for (int iy = 0; iy < m.ny; ++iy) {
    EXPECT_TRUE(m.at(4, iy).boundary);
    EXPECT_TRUE(m.at(5, iy).boundary);
    EXPECT_FALSE(m.at(3, iy).boundary);
  }
}

TEST(ExtractBoundariesTest, UniformMapHasNone) {
  SynthesisMap m = Blank(5, 5, 0.2);
  FlagBoundaries(&m);
  EXPECT_TRUE(ExtractBoundaries(m).empty());
  for (const MapCell& c : m.cells) EXPECT_FALSE(c.boundary);
}

TEST(ExtractBoundariesTest, TiedCellIsBoundaryWithoutLine) {
  SynthesisMap m = Blank(3, 3, 1.0);
  m.at(1, 1).tied = true;
  FlagBoundaries(&m);
  EXPECT_TRUE(m.at(1, 1).boundary);
  EXPECT_FALSE(m.at(0, 0).boundary);
  EXPECT_TRUE(ExtractBoundaries(m).empty());
}

TEST(ExtractBoundariesProperty, LinesSeparateTheirLabels) {
  // A disc of label "1" inside "0", plus an unsolved corner.
  SynthesisMap m = Blank(12, 12, 0.5);
  for (MapCell& c : m.cells) {
    if (std::hypot(c.x - 2.75, c.y - 2.75) < 1.6) c.word = {1};
  }
  m.at(11, 11).solved = false;
  FlagBoundaries(&m);
  const auto lines = ExtractBoundaries(m);
  std::set<std::pair<std::string, std::string>> pairs;
  for (const BoundaryPolyline& l : lines) {
    pairs.insert({l.label_a, l.label_b});
    for (size_t i = 1; i < l.points.size(); ++i) {
      // Each piece is one cell edge; the two cells beside its midpoint carry
      // the line's labels.
      const Vec3 a = l.points[i - 1], b = l.points[i];
      EXPECT_NEAR((b - a).norm(), m.resolution, 1e-12);
      const Vec3 mid = 0.5 * (a + b);
      const Vec3 off = Vec3(-(b - a).y(), (b - a).x(), 0) * 0.5;
      const auto label = [&](const Vec3& p) {
        const int ix = static_cast<int>(std::lround(p.x() / m.resolution));
        const int iy = static_cast<int>(std::lround(p.y() / m.resolution));
        return CellLabel(m.at(ix, iy));
      };
      std::set<std::string> sides = {label(mid + off), label(mid - off)};
      EXPECT_EQ(sides, (std::set<std::string>{l.label_a, l.label_b}));
    }
  }
  EXPECT_EQ(pairs, (std::set<std::pair<std::string, std::string>>{{"0", "1"}, {"0", "UNSOLVED"}}));
}

TEST(MapSliceTest, ZeroResolutionThrows) {
  try {
    MapSlice(DubinsControlSet(), RotationMatrix(), {}, 0.0, DefaultMapParams());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidInput);
  }
}

TEST(MapSliceTest, SmallDubinsMap) {
  const SynthesisMap& m = SmallDubinsMap();
  ASSERT_EQ(m.nx, 10);
  ASSERT_EQ(m.ny, 8);
  EXPECT_EQ(CellLabel(m.at(0, 0)), "");
  // (0.5, 0.4) sits in the LSL/RSR tie on this slice.
  const MapCell& c = m.at(5, 4);
  EXPECT_NEAR(c.x, 0.5, 1e-12);
  EXPECT_NEAR(c.y, 0.4, 1e-12);
  ASSERT_TRUE(c.solved);
  const DubinsLabel truth = DubinsRegionLabel({0.5, 0.4, 0.0});
  EXPECT_NEAR(c.total_time, DubinsShortest({0.5, 0.4, 0.0}, {}).length, 1e-6);
  EXPECT_TRUE(c.boundary);
  EXPECT_NE(std::find(truth.tied.begin(), truth.tied.end(), "RSR"), truth.tied.end());
}

TEST(MapSliceProperty, TimesMatchClosedForm) {
  const SynthesisMap& m = SmallDubinsMap();
  for (const MapCell& c : m.cells) {
    ASSERT_TRUE(c.solved) << c.x << "," << c.y;
    EXPECT_NEAR(c.total_time, DubinsShortest({c.x, c.y, 0.0}, {}).length, 1e-6)
        << c.x << "," << c.y;
    if (c.word.empty()) continue;
    const Pose end = Simulate(Pose::Planar(c.x, c.y, 0.0), c.trajectory, DubinsControlSet());
    EXPECT_LE(end.position.norm(), 1e-6);
  }
}

TEST(MapSliceProperty, CsvIsDeterministic) {
  const SynthesisMap& a = SmallDubinsMap();
  const SynthesisMap b = MapSlice(DubinsControlSet(), RotationMatrix(), {0.0, 1.0, 0.0, 0.8},
                                  0.1, DefaultMapParams());
  EXPECT_EQ(MapToCsv(a), MapToCsv(b));
  const std::string csv = MapToCsv(a);
  EXPECT_EQ(csv.rfind("x,y,word,total_time,boundary\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 10 * 8);
  EXPECT_NE(MapToSvg(a).find("<svg"), std::string::npos);
}

TEST(CrossCheckTest, SamplesSplitBetweenBoundaryAndInterior) {
  const SynthesisMap& m = SmallDubinsMap();
  const CrossCheckReport r = CrossCheckWithSwitchTest(m, DubinsControlSet(), 10);
  EXPECT_EQ(r.samples, static_cast<int>(r.entries.size()));
  EXPECT_LE(r.samples, 10);
  EXPECT_GT(r.samples, 0);
  int agreements = 0;
  for (const CrossCheckSample& e : r.entries) {
    agreements += e.agrees;
    if (e.on_boundary) EXPECT_EQ(e.agrees, e.verdict == Verdict::kOnCurve);
  }
  EXPECT_EQ(agreements, r.agreements);
  EXPECT_NEAR(r.agreement_rate, static_cast<double>(r.agreements) / r.samples, 1e-15);
  EXPECT_EQ(CrossCheckWithSwitchTest(m, DubinsControlSet(), 0).samples, 0);
}

}  // namespace
}  // namespace kinosynth
