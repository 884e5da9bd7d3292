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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <utility>

#include "kinosynth/errors.hpp"
#include "kinosynth/parallel.hpp"

namespace kinosynth {
namespace {

constexpr int kMaxRepolishPasses = 5;

std::string Fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

int CellsAlong(double lo, double hi, double res) {
  return std::max(1, static_cast<int>(std::ceil((hi - lo) / res - 1e-9)));
}

// Fills a cell from a solver result. Among tied words the smallest index
// sequence is the label, so tie regions do not speckle.
void FillCell(const SolveResult& r, MapCell* cell) {
  cell->solved = true;
  cell->total_time = r.total_time;
  cell->trajectory = r.trajectory;
  cell->word = r.trajectory.Word();
  cell->tied = !r.ties.empty();
  for (const WordCandidate& t : r.ties) {
    if (t.word < cell->word) {
      cell->word = t.word;
      cell->trajectory = t.trajectory;
    }
  }
}

struct Retry {
  bool replace = false;
  bool tie = false;
  MapCell cell;
};

Retry RetryWithNeighbours(const SynthesisMap& map, int ix, int iy,
                          const ControlSet& u, const Pose& goal,
                          const SolverParams& params) {
  Retry out;
  const MapCell& self = map.at(ix, iy);
  out.cell = self;
  if (self.solved && self.word.empty()) return out;  // the goal itself
  const Pose start{Vec3(self.x, self.y, 0.0), map.orientation};
  const std::string own = CellLabel(self);
  std::set<std::string> tried;
  const int dx[4] = {-1, 1, 0, 0}, dy[4] = {0, 0, -1, 1};
  for (int n = 0; n < 4; ++n) {
    const int jx = ix + dx[n], jy = iy + dy[n];
    if (jx < 0 || jy < 0 || jx >= map.nx || jy >= map.ny) continue;
    const MapCell& nb = map.at(jx, jy);
    if (!nb.solved || nb.word.empty()) continue;
    const std::string label = CellLabel(nb);
    if (label == own || !tried.insert(label).second) continue;
    std::vector<Segment> segs = nb.trajectory.segments();
    const double err = PolishDurations(start, goal, u, &segs);
    if (!(err <= params.eps_goal)) continue;
    Trajectory traj(segs, params.eps_seg);
    if (PointError(ConfigFromPose(Simulate(start, traj, u)), ConfigFromPose(goal)) >
        params.eps_goal) {
      continue;
    }
    const double t = traj.total_time();
    const double best = out.cell.solved ? out.cell.total_time
                                        : std::numeric_limits<double>::infinity();
    if (t < best - params.tie_tolerance) {
      out.replace = true;
      out.tie = false;
      out.cell.solved = true;
      out.cell.total_time = t;
      out.cell.trajectory = traj;
      out.cell.word = traj.Word();
      out.cell.tied = false;
    } else if (std::abs(t - best) <= params.tie_tolerance &&
               traj.Word() != out.cell.word) {
      out.tie = true;
    }
  }
  return out;
}

uint32_t Fnv1a(const std::string& s) {
  uint32_t h = 2166136261u;
  for (unsigned char c : s) {
    h ^= c;
    h *= 16777619u;
  }
  return h;
}

std::string WordColour(const std::string& label) {
  if (label == "UNSOLVED") return "#000000";
  if (label.empty()) return "#ffffff";
  const uint32_t h = Fnv1a(label);
  // Keep channels in the light half so curves stay visible.
  const int r = 96 + (h & 0x9f), g = 96 + ((h >> 8) & 0x9f),
            b = 96 + ((h >> 16) & 0x9f);
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
  return buf;
}

}  // namespace

SolverParams DefaultMapParams() {
  SolverParams p;
  p.angle_cells = 256;
  p.offset_cells = 64;
  p.polish_per_word = 2;
  return p;
}

std::string CellLabel(const MapCell& cell) {
  if (!cell.solved) return "UNSOLVED";
  return ControlSet::IndexWord(cell.word);
}

SynthesisMap MapSlice(const ControlSet& u, const RotationMatrix& orientation,
                      const MapBounds& bounds, double resolution,
                      const SolverParams& params) {
  if (!(resolution > 0.0) || !std::isfinite(resolution)) {
    throw Error(ErrorCode::kInvalidInput, "map resolution must be positive");
  }
  if (!(bounds.x_max > bounds.x_min) || !(bounds.y_max > bounds.y_min)) {
    throw Error(ErrorCode::kInvalidInput, "map bounds are empty");
  }
  SynthesisMap map;
  map.bounds = bounds;
  map.resolution = resolution;
  map.orientation = orientation;
  map.nx = CellsAlong(bounds.x_min, bounds.x_max, resolution);
  map.ny = CellsAlong(bounds.y_min, bounds.y_max, resolution);
  map.cells.resize(static_cast<size_t>(map.nx) * map.ny);
  const Pose goal{Vec3::Zero(), RotationMatrix::Identity()};
  const int threads = ResolveThreads(params.threads);
  SolverParams inner = params;
  inner.threads = 1;  // parallelism lives at the cell level

  ParallelFor(static_cast<int>(map.cells.size()), threads, [&](int idx) {
    MapCell& cell = map.cells[idx];
    cell.x = bounds.x_min + (idx % map.nx) * resolution;
    cell.y = bounds.y_min + (idx / map.nx) * resolution;
    const Pose start{Vec3(cell.x, cell.y, 0.0), orientation};
    try {
      FillCell(SolveShortest(start, goal, u, inner), &cell);
    } catch (const Error&) {
      cell.solved = false;
    }
  });

  for (int pass = 0; pass < kMaxRepolishPasses; ++pass) {
    std::vector<Retry> retries(map.cells.size());
    ParallelFor(static_cast<int>(map.cells.size()), threads, [&](int idx) {
      retries[idx] = RetryWithNeighbours(map, idx % map.nx, idx / map.nx, u,
                                         goal, inner);
    });
    bool changed = false;
    for (size_t i = 0; i < retries.size(); ++i) {
      if (retries[i].replace) {
        map.cells[i] = retries[i].cell;
        changed = true;
      }
      if (retries[i].tie) map.cells[i].tied = true;
    }
    if (!changed) break;
  }
  FlagBoundaries(&map);
  map.curves = ExtractBoundaries(map);
  return map;
}

void FlagBoundaries(SynthesisMap* map) {
  for (int iy = 0; iy < map->ny; ++iy) {
    for (int ix = 0; ix < map->nx; ++ix) {
      MapCell& c = map->at(ix, iy);
      const std::string label = CellLabel(c);
      bool differs = c.tied;
      const int dx[4] = {-1, 1, 0, 0}, dy[4] = {0, 0, -1, 1};
      for (int n = 0; n < 4 && !differs; ++n) {
        const int jx = ix + dx[n], jy = iy + dy[n];
        if (jx < 0 || jy < 0 || jx >= map->nx || jy >= map->ny) continue;
        differs = CellLabel(map->at(jx, jy)) != label;
      }
      c.boundary = differs;
    }
  }
}

std::vector<BoundaryPolyline> ExtractBoundaries(const SynthesisMap& map) {
  // Grid vertices are (a, b) with x = x_min + (a − ½)·res.
  using Vertex = std::pair<int, int>;
  using Edge = std::pair<Vertex, Vertex>;
  std::map<std::pair<std::string, std::string>, std::vector<Edge>> by_pair;
  auto tag = [](std::string a, std::string b) {
    if (b < a) std::swap(a, b);
    return std::make_pair(a, b);
  };
  for (int iy = 0; iy < map.ny; ++iy) {
    for (int ix = 0; ix < map.nx; ++ix) {
      const std::string here = CellLabel(map.at(ix, iy));
      if (ix + 1 < map.nx) {
        const std::string right = CellLabel(map.at(ix + 1, iy));
        if (right != here) {
          by_pair[tag(here, right)].push_back({{ix + 1, iy}, {ix + 1, iy + 1}});
        }
      }
      if (iy + 1 < map.ny) {
        const std::string up = CellLabel(map.at(ix, iy + 1));
        if (up != here) {
          by_pair[tag(here, up)].push_back({{ix, iy + 1}, {ix + 1, iy + 1}});
        }
      }
    }
  }
  auto point = [&](const Vertex& v) {
    return Vec3(map.bounds.x_min + (v.first - 0.5) * map.resolution,
                map.bounds.y_min + (v.second - 0.5) * map.resolution, 0.0);
  };
  std::vector<BoundaryPolyline> out;
  for (const auto& [labels, edges] : by_pair) {
    std::map<Vertex, std::vector<int>> incident;
    for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
      incident[edges[e].first].push_back(e);
      incident[edges[e].second].push_back(e);
    }
    std::vector<bool> used(edges.size(), false);
    auto walk = [&](Vertex v) {
      BoundaryPolyline line{labels.first, labels.second, {point(v)}};
      for (;;) {
        int next = -1;
        for (int e : incident[v]) {
          if (!used[e]) {
            next = e;
            break;
          }
        }
        if (next < 0) break;
        used[next] = true;
        v = edges[next].first == v ? edges[next].second : edges[next].first;
        line.points.push_back(point(v));
      }
      if (line.points.size() > 1) out.push_back(std::move(line));
    };
    // Open chains start at vertices of odd degree; what remains are loops.
    for (const auto& [v, es] : incident) {
      if (es.size() % 2 == 1) walk(v);
    }
    for (const auto& [v, es] : incident) walk(v);
  }
  return out;
}

CrossCheckReport CrossCheckWithSwitchTest(const SynthesisMap& map,
                                          const ControlSet& u,
                                          int sample_count) {
  CrossCheckReport report;
  if (sample_count <= 0) return report;
  std::vector<Vec3> boundary;
  std::vector<std::pair<Vec3, const MapCell*>> interior;
  for (int iy = 0; iy < map.ny; ++iy) {
    for (int ix = 0; ix < map.nx; ++ix) {
      const MapCell& c = map.at(ix, iy);
      const std::string label = CellLabel(c);
      if (ix + 1 < map.nx && CellLabel(map.at(ix + 1, iy)) != label) {
        boundary.push_back(Vec3(c.x + 0.5 * map.resolution, c.y, 0.0));
      }
      if (iy + 1 < map.ny && CellLabel(map.at(ix, iy + 1)) != label) {
        boundary.push_back(Vec3(c.x, c.y + 0.5 * map.resolution, 0.0));
      }
      if (c.boundary || !c.solved || c.word.empty()) continue;
      bool uniform = ix > 0 && iy > 0 && ix + 1 < map.nx && iy + 1 < map.ny;
      for (int dy = -1; dy <= 1 && uniform; ++dy) {
        for (int dx = -1; dx <= 1 && uniform; ++dx) {
          uniform = CellLabel(map.at(ix + dx, iy + dy)) == label;
        }
      }
      if (uniform) interior.push_back({Vec3(c.x, c.y, 0.0), &c});
    }
  }
  const Pose goal{Vec3::Zero(), RotationMatrix::Identity()};
  const int want_boundary = std::min<int>(boundary.size(), sample_count / 2);
  const int want_interior =
      std::min<int>(interior.size(), sample_count - want_boundary);
  for (int s = 0; s < want_boundary; ++s) {
    const Vec3& p = boundary[(static_cast<size_t>(s) * boundary.size()) / want_boundary];
    CrossCheckSample e;
    e.position = p;
    e.on_boundary = true;
    e.verdict = ClassifyConfiguration(Pose{p, map.orientation}, u, goal).verdict;
    e.agrees = e.verdict == Verdict::kOnCurve;
    report.entries.push_back(e);
  }
  for (int s = 0; s < want_interior; ++s) {
    const auto& [p, cell] =
        interior[(static_cast<size_t>(s) * interior.size()) / want_interior];
    CrossCheckSample e;
    e.position = p;
    const SwitchClassification c =
        ClassifyConfiguration(Pose{p, map.orientation}, u, goal);
    e.verdict = c.verdict;
    e.agrees = c.verdict == Verdict::kInterior &&
               c.first_hint == cell->word.front() &&
               c.last_hint == cell->word.back();
    report.entries.push_back(e);
  }
  report.samples = static_cast<int>(report.entries.size());
  for (const auto& e : report.entries) report.agreements += e.agrees ? 1 : 0;
  report.agreement_rate =
      report.samples ? static_cast<double>(report.agreements) / report.samples : 0.0;
  return report;
}

std::string MapToCsv(const SynthesisMap& map) {
  std::ostringstream os;
  os << "x,y,word,total_time,boundary\n";
  for (const MapCell& c : map.cells) {
    os << Fmt("%.10g", c.x) << ',' << Fmt("%.10g", c.y) << ',' << CellLabel(c)
       << ',' << (c.solved ? Fmt("%.9f", c.total_time) : std::string("nan"))
       << ',' << (c.boundary ? 1 : 0) << '\n';
  }
  return os.str();
}

std::string MapToSvg(const SynthesisMap& map, double pixels_per_unit) {
  const MapBounds& b = map.bounds;
  const double h = map.resolution / 2.0;
  const double x0 = b.x_min - h, y0 = b.y_min - h;
  const double w = map.nx * map.resolution, ht = map.ny * map.resolution;
  std::ostringstream os;
  // y is flipped so the picture reads with +y up.
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\""
     << Fmt("%.6g", w * pixels_per_unit) << "\" height=\""
     << Fmt("%.6g", ht * pixels_per_unit) << "\" viewBox=\"" << Fmt("%.10g", x0)
     << ' ' << Fmt("%.10g", -(y0 + ht)) << ' ' << Fmt("%.10g", w) << ' '
     << Fmt("%.10g", ht) << "\">\n";
  for (const MapCell& c : map.cells) {
    os << "<rect x=\"" << Fmt("%.10g", c.x - h) << "\" y=\""
       << Fmt("%.10g", -(c.y + h)) << "\" width=\"" << Fmt("%.10g", map.resolution)
       << "\" height=\"" << Fmt("%.10g", map.resolution) << "\" fill=\""
       << WordColour(CellLabel(c)) << "\"><title>" << CellLabel(c)
       << "</title></rect>\n";
  }
  const double stroke = map.resolution * 0.3;
  for (const BoundaryPolyline& line : map.curves) {
    os << "<polyline fill=\"none\" stroke=\"#000\" stroke-width=\""
       << Fmt("%.6g", stroke) << "\" points=\"";
    for (size_t i = 0; i < line.points.size(); ++i) {
      if (i) os << ' ';
      os << Fmt("%.10g", line.points[i].x()) << ','
         << Fmt("%.10g", -line.points[i].y());
    }
    os << "\"><title>" << line.label_a << " | " << line.label_b
       << "</title></polyline>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace kinosynth
