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

#ifndef KINOSYNTH_PROBLEM_IO_HPP_
#define KINOSYNTH_PROBLEM_IO_HPP_

#include <string>

#include "json.hpp"
#include "kinosynth/control.hpp"
#include "kinosynth/extremal.hpp"
#include "kinosynth/geometry.hpp"
#include "kinosynth/solver.hpp"
#include "kinosynth/switching.hpp"
#include "kinosynth/synthesis.hpp"

namespace kinosynth {

// A pose is {"x", "y", "theta"} (planar), {"position": [..], "rotation":
// [[row], [row], [row]]}, or {"points": {"p_o", "p_x", "p_y"}}.
Pose PoseFromJson(const nlohmann::json& j);
nlohmann::json PoseToJson(const Pose& p);

// Overlays any keys present in `j` onto `params`. Rejects out-of-range
// values with kInvalidInput.
void ParamsFromJson(const nlohmann::json& j, SolverParams* params);
nlohmann::json ParamsToJson(const SolverParams& params);

// "control_set" is either an inline object or a path relative to `base_dir`.
ControlSet ControlSetRef(const nlohmann::json& j, const std::string& base_dir);

struct Problem {
  ControlSet controls;
  nlohmann::json control_json;  // as written back into results
  Pose start;
  Pose goal;
  SolverParams params;
};

// {"control_set", "start", "goal", "params"?}. "goal" defaults to the origin.
Problem ProblemFromJson(const nlohmann::json& j, const std::string& base_dir);
Problem LoadProblem(const std::string& path);

nlohmann::json TrajectoryToJson(const Trajectory& t, const ControlSet& u);
Trajectory TrajectoryFromJson(const nlohmann::json& j, const ControlSet& u);
nlohmann::json CertificateToJson(const ExtremalCertificate& c);
ExtremalCertificate CertificateFromJson(const nlohmann::json& j);
nlohmann::json ReportToJson(const NecessaryConditionReport& r);

// Self-contained: the output can be fed back to `check`.
nlohmann::json ResultToJson(const Problem& problem, const SolveResult& r);
nlohmann::json ClassificationToJson(const SwitchClassification& c,
                                    const ControlSet& u);

// {"control_set", "theta", "bounds": [x_min, x_max, y_min, y_max],
//  "resolution", "params"?, "csv"?, "svg"?}
struct MapConfig {
  ControlSet controls;
  double theta = 0.0;
  MapBounds bounds;
  double resolution = 0.1;
  SolverParams params;
  std::string csv_path;
  std::string svg_path;
  double pixels_per_unit = 60.0;
};
MapConfig MapConfigFromJson(const nlohmann::json& j, const std::string& base_dir);

std::string DirName(const std::string& path);

}  // namespace kinosynth

#endif  // KINOSYNTH_PROBLEM_IO_HPP_
