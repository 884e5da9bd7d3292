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

#ifndef KINOSYNTH_DUBINS_HPP_
#define KINOSYNTH_DUBINS_HPP_

#include <string>
#include <vector>

#include "kinosynth/control.hpp"

namespace kinosynth {

// Closed-form unit-speed, unit-radius Dubins paths.
enum class DubinsType { kLSL, kLSR, kRSL, kRSR, kLRL, kRLR };

const char* DubinsTypeName(DubinsType t);

struct PlanarState {
  double x = 0.0, y = 0.0, theta = 0.0;
};

struct DubinsWord {
  DubinsType type = DubinsType::kLSL;
  double t = 0.0, p = 0.0, q = 0.0;  // radians / length / radians
  double length = 0.0;

  // Letters after dropping zero-length pieces and merging repeats, e.g. an
  // LSL with t = q = 0 is "S".
  std::string Canonical(double eps = 1e-9) const;
};

// Tie threshold on length differences.
inline constexpr double kDubinsTieTol = 1e-9;

// Every feasible word, in type order.
std::vector<DubinsWord> DubinsCandidates(const PlanarState& start,
                                         const PlanarState& goal);
// Minimum length; ties go to the earlier type in LSL<LSR<RSL<RSR<LRL<RLR.
DubinsWord DubinsShortest(const PlanarState& start, const PlanarState& goal);

struct DubinsLabel {
  std::string word;               // canonical argmin word
  bool boundary = false;          // another distinct word ties
  std::vector<std::string> tied;  // all optimal canonical words, sorted
};

// Label of q for the slice synthesis to the origin.
DubinsLabel DubinsRegionLabel(const PlanarState& q,
                              double tie_tol = kDubinsTieTol);

// As a trajectory over DubinsControlSet() (S=0, L=1, R=2).
Trajectory DubinsToTrajectory(const DubinsWord& w);
// Letters to indices of DubinsControlSet().
std::vector<int> DubinsLettersToWord(const std::string& letters);

}  // namespace kinosynth

#endif  // KINOSYNTH_DUBINS_HPP_
