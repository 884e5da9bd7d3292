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

#ifndef KINOSYNTH_SYNTHESIS_HPP_
#define KINOSYNTH_SYNTHESIS_HPP_

#include <string>
#include <vector>

#include "kinosynth/control.hpp"
#include "kinosynth/geometry.hpp"
#include "kinosynth/solver.hpp"
#include "kinosynth/switching.hpp"

namespace kinosynth {

struct MapBounds {
  double x_min = -4.0, x_max = 4.0;
  double y_min = -4.0, y_max = 4.0;
};

struct MapCell {
  double x = 0.0, y = 0.0;  // cell centre
  bool solved = false;      // false: UNSOLVED
  std::vector<int> word;
  double total_time = 0.0;
  bool boundary = false;
  bool tied = false;  // several words within the tie tolerance
  Trajectory trajectory;
};

struct BoundaryPolyline {
  std::string label_a, label_b;  // sorted
  std::vector<Vec3> points;
};

// Cells are stored row-major: index = iy * nx + ix. Cell centres sit at
// x_min + ix * resolution, so the lower-left corner is a centre.
struct SynthesisMap {
  MapBounds bounds;
  double resolution = 0.1;
  RotationMatrix orientation;
  int nx = 0, ny = 0;
  std::vector<MapCell> cells;
  std::vector<BoundaryPolyline> curves;

  const MapCell& at(int ix, int iy) const { return cells[iy * nx + ix]; }
  MapCell& at(int ix, int iy) { return cells[iy * nx + ix]; }
};

// Label used for comparisons and CSV: '+'-joined indices, "" for the goal,
// "UNSOLVED" when the solver gave up.
std::string CellLabel(const MapCell& cell);

// Solver settings used for maps when a config does not override them:
// the planar search at a coarser direction grid.
SolverParams DefaultMapParams();

// Solves every cell to the origin. A second pass retries each cell with its
// neighbours' words (durations re-polished) and keeps any shorter path.
SynthesisMap MapSlice(const ControlSet& u, const RotationMatrix& orientation,
                      const MapBounds& bounds, double resolution,
                      const SolverParams& params);

// Recomputes boundary flags from 4-neighbour label changes and ties.
void FlagBoundaries(SynthesisMap* map);

// Chains label-change cell edges into polylines, one set per label pair.
std::vector<BoundaryPolyline> ExtractBoundaries(const SynthesisMap& map);

struct CrossCheckSample {
  Vec3 position = Vec3::Zero();
  bool on_boundary = false;  // expected OnCurve rather than Interior
  Verdict verdict = Verdict::kNoFeasibleK;
  bool agrees = false;
};

struct CrossCheckReport {
  int samples = 0;
  int agreements = 0;
  double agreement_rate = 0.0;
  std::vector<CrossCheckSample> entries;
};

// Runs the switching test on evenly strided boundary-edge midpoints and
// interior cell centres (half each).
CrossCheckReport CrossCheckWithSwitchTest(const SynthesisMap& map,
                                          const ControlSet& u,
                                          int sample_count);

std::string MapToCsv(const SynthesisMap& map);
std::string MapToSvg(const SynthesisMap& map, double pixels_per_unit = 60.0);

}  // namespace kinosynth

#endif  // KINOSYNTH_SYNTHESIS_HPP_
