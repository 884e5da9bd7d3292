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

#ifndef KINOSYNTH_SOLVER_HPP_
#define KINOSYNTH_SOLVER_HPP_

#include <limits>
#include <string>
#include <vector>

#include "kinosynth/control.hpp"
#include "kinosynth/extremal.hpp"
#include "kinosynth/geometry.hpp"

namespace kinosynth {

struct SolverParams {
  int max_segments = 12;
  double eps_goal = 1e-6;  // summed three-point mismatch
  double eps_seg = 1e-6;   // shorter segments are dropped

  // Planar search: k directions, and magnitudes (or c offsets) for the
  // hypotheses whose first and last controls share an angular rate.
  int angle_cells = 1024;
  int offset_cells = 256;
  // Spatial search: icosphere subdivision level (3 → 642 directions) and
  // log-spaced magnitudes of k.
  int sphere_subdivisions = 3;
  int magnitude_cells = 32;
  double magnitude_min = 1e-2;
  double magnitude_max = 1e2;

  int polish_per_word = 3;      // seeds kept per word for the polish
  double violation_tol = 1e-7;  // maximization-condition slack
  double tie_tolerance = 1e-6;  // distinct words this close in time tie
  double touch_tol_planar = 1e-9;
  double touch_tol_spatial = 1e-3;
  int threads = 1;
};

// A distinct goal-reaching word found during the search.
struct WordCandidate {
  std::vector<int> word;
  Trajectory trajectory;
  double total_time = 0.0;
  double goal_error = 0.0;
  bool verified = false;
};

struct SolveResult {
  Trajectory trajectory;
  ExtremalCertificate certificate;
  double goal_error = 0.0;
  double total_time = 0.0;
  bool verified = false;  // certificate passes the maximization check
  NecessaryConditionReport report;
  // Other verified words within tie_tolerance of total_time.
  std::vector<WordCandidate> ties;
  // Every goal-reaching word found, sorted by time.
  std::vector<WordCandidate> candidates;
};

struct ExtremalRollout {
  Trajectory trajectory;   // the full extremal up to the budget
  Trajectory truncated;    // cut at the closest approach to the goal
  double closest_error = std::numeric_limits<double>::infinity();
  bool partial = false;    // budget (time or segments) ran out
};

struct RolloutOptions {
  int first_control = -1;  // forced first control; -1 picks the argmax
  double touch_tol = 1e-9;
  bool track_goal = true;  // closest approach + goal-directed singular exit
};

// Integrates the PMP-maximizing control from q0. Switches happen where
// another control's H rises through the active one; crossings are exact.
// Throws kAmbiguousExtremal when no control can hold H > 0 at q0 or a tie
// cannot be resolved by lookahead.
ExtremalRollout ExtremalTrajectory(const ExtremalCertificate& cert,
                                   const Pose& q0, const ControlSet& u,
                                   const Pose& goal, int max_segments,
                                   double max_time,
                                   const RolloutOptions& opts = {});
// Point-configuration form. The goal orientation is needed to leave
// singular arcs; the result stops where the extremal meets the goal.
Trajectory ExtremalTrajectory(const ExtremalCertificate& cert,
                              const PointConfiguration& q0,
                              const ControlSet& u,
                              const PointConfiguration& goal,
                              int max_segments, double max_time,
                              double eps_goal = 1e-6);

// Throws kNoPathFound when nothing reaches the goal within eps_goal.
SolveResult SolveShortest(const PointConfiguration& q_s,
                          const PointConfiguration& q_g, const ControlSet& u,
                          const SolverParams& params = {});
SolveResult SolveShortest(const Pose& q_s, const Pose& q_g,
                          const ControlSet& u,
                          const SolverParams& params = {});

// Refines durations of a fixed word to hit the goal (Levenberg–Marquardt on
// the exact Jacobian). Returns the achieved goal error.
double PolishDurations(const Pose& q_s, const Pose& q_g, const ControlSet& u,
                       std::vector<Segment>* segments, int max_iterations = 100);

// Multipliers for a given path: least squares over H = 1 at both ends of
// every segment, projected toward `hint` when the system is
// underdetermined and then screened by the maximization check.
ExtremalCertificate RecoverCertificate(const Pose& q_s, const Pose& q_g,
                                       const Trajectory& traj,
                                       const ControlSet& u,
                                       const std::vector<ExtremalCertificate>& hints,
                                       double violation_tol,
                                       NecessaryConditionReport* report);

// Exhaustive word enumeration with coordinate-descent durations; an
// independent check on SolveShortest. max_segments ≤ 5.
SolveResult BruteForceOracle(const PointConfiguration& q_s,
                             const PointConfiguration& q_g,
                             const ControlSet& u, int max_segments,
                             double duration_grid, double eps_goal = 1e-6);

struct DescentResult {
  SolveResult result;
  int iterations = 0;
  bool converged = false;
};

// Experimental: climbs k along improving directions until none exists.
DescentResult ExperimentalDescent(const PointConfiguration& q_s,
                                  const PointConfiguration& q_g,
                                  const ControlSet& u,
                                  const ExtremalCertificate& cert0,
                                  const SolverParams& params = {});

// True when the problem lives in the xy plane (z-axis turns, yaw-only poses).
bool IsPlanarProblem(const Pose& q_s, const Pose& q_g, const ControlSet& u);

}  // namespace kinosynth

#endif  // KINOSYNTH_SOLVER_HPP_
