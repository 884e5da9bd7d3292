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

#include "kinosynth/problem_io.hpp"

#include <cmath>

#include "kinosynth/control_io.hpp"
#include "kinosynth/errors.hpp"

namespace kinosynth {
namespace {

using nlohmann::json;

double Number(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    throw Error(ErrorCode::kInvalidInput, std::string("expected number '") + key + "'");
  }
  const double v = j.at(key).get<double>();
  if (!std::isfinite(v)) {
    throw Error(ErrorCode::kInvalidInput, std::string("non-finite '") + key + "'");
  }
  return v;
}

template <typename T>
void Overlay(const json& j, const char* key, T lo, T hi, T* out) {
  if (!j.contains(key)) return;
  if (!j.at(key).is_number()) {
    throw Error(ErrorCode::kInvalidInput, std::string("param '") + key + "' must be a number");
  }
  const T v = j.at(key).get<T>();
  if (!(v >= lo && v <= hi)) {
    throw Error(ErrorCode::kInvalidInput, std::string("param '") + key + "' out of range");
  }
  *out = v;
}

}  // namespace

std::string DirName(const std::string& path) {
  const size_t slash = path.find_last_of('/');
  if (slash == std::string::npos) return ".";
  return slash == 0 ? "/" : path.substr(0, slash);
}

Pose PoseFromJson(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kInvalidInput, "pose must be an object");
  if (j.contains("theta") || j.contains("x")) {
    return Pose::Planar(Number(j, "x"), Number(j, "y"), Number(j, "theta"));
  }
  if (j.contains("points")) {
    const json& p = j.at("points");
    PointConfiguration q;
    q.p_o = Vec3FromJson(p.at("p_o"), "p_o");
    q.p_x = Vec3FromJson(p.at("p_x"), "p_x");
    q.p_y = Vec3FromJson(p.at("p_y"), "p_y");
    return ToPose(q);
  }
  Pose pose;
  pose.position = Vec3FromJson(j.at("position"), "position");
  if (j.contains("rotation")) {
    const json& r = j.at("rotation");
    if (!r.is_array() || r.size() != 3) {
      throw Error(ErrorCode::kInvalidInput, "rotation must be 3 rows");
    }
    Mat3 m;
    for (int i = 0; i < 3; ++i) m.row(i) = Vec3FromJson(r.at(i), "rotation row").transpose();
    pose.rotation = RotationMatrix::FromMatrix(m, kExternalTol);
  }
  return pose;
}

json PoseToJson(const Pose& p) {
  const Mat3& m = p.rotation.matrix();
  const bool planar = p.position.z() == 0.0 && m(2, 2) == 1.0 &&
                      m(0, 2) == 0.0 && m(1, 2) == 0.0;
  if (planar) {
    return {{"x", p.position.x()}, {"y", p.position.y()}, {"theta", p.rotation.Yaw()}};
  }
  json rows = json::array();
  for (int i = 0; i < 3; ++i) rows.push_back(Vec3ToJson(m.row(i).transpose()));
  return {{"position", Vec3ToJson(p.position)}, {"rotation", rows}};
}

void ParamsFromJson(const json& j, SolverParams* p) {
  if (j.is_null()) return;
  if (!j.is_object()) throw Error(ErrorCode::kInvalidInput, "params must be an object");
  Overlay(j, "max_segments", 1, 64, &p->max_segments);
  Overlay(j, "eps_goal", 1e-14, 1.0, &p->eps_goal);
  Overlay(j, "eps_seg", 0.0, 1.0, &p->eps_seg);
  Overlay(j, "angle_cells", 8, 1 << 20, &p->angle_cells);
  Overlay(j, "offset_cells", 2, 1 << 20, &p->offset_cells);
  Overlay(j, "sphere_subdivisions", 0, 6, &p->sphere_subdivisions);
  Overlay(j, "magnitude_cells", 1, 4096, &p->magnitude_cells);
  Overlay(j, "magnitude_min", 1e-12, 1e12, &p->magnitude_min);
  Overlay(j, "magnitude_max", 1e-12, 1e12, &p->magnitude_max);
  Overlay(j, "polish_per_word", 1, 1000, &p->polish_per_word);
  Overlay(j, "violation_tol", 0.0, 1.0, &p->violation_tol);
  Overlay(j, "tie_tolerance", 0.0, 1.0, &p->tie_tolerance);
  Overlay(j, "touch_tol_planar", 0.0, 1.0, &p->touch_tol_planar);
  Overlay(j, "touch_tol_spatial", 0.0, 1.0, &p->touch_tol_spatial);
  Overlay(j, "threads", 0, 4096, &p->threads);
  if (p->magnitude_min > p->magnitude_max) {
    throw Error(ErrorCode::kInvalidInput, "magnitude_min exceeds magnitude_max");
  }
}

json ParamsToJson(const SolverParams& p) {
  return {{"max_segments", p.max_segments},
          {"eps_goal", p.eps_goal},
          {"eps_seg", p.eps_seg},
          {"angle_cells", p.angle_cells},
          {"offset_cells", p.offset_cells},
          {"sphere_subdivisions", p.sphere_subdivisions},
          {"magnitude_cells", p.magnitude_cells},
          {"magnitude_min", p.magnitude_min},
          {"magnitude_max", p.magnitude_max},
          {"polish_per_word", p.polish_per_word},
          {"violation_tol", p.violation_tol},
          {"tie_tolerance", p.tie_tolerance},
          {"touch_tol_planar", p.touch_tol_planar},
          {"touch_tol_spatial", p.touch_tol_spatial},
          {"threads", p.threads}};
}

ControlSet ControlSetRef(const json& j, const std::string& base_dir) {
  if (j.is_string()) {
    std::string path = j.get<std::string>();
    if (!path.empty() && path[0] != '/') path = base_dir + "/" + path;
    return LoadControlSet(path);
  }
  return ControlSetFromJson(j);
}

Problem ProblemFromJson(const json& j, const std::string& base_dir) {
  if (!j.is_object()) throw Error(ErrorCode::kInvalidInput, "problem must be an object");
  if (!j.contains("control_set")) {
    throw Error(ErrorCode::kInvalidInput, "problem needs 'control_set'");
  }
  Problem p;
  p.controls = ControlSetRef(j.at("control_set"), base_dir);
  p.control_json = ControlSetToJson(p.controls);
  if (!j.contains("start")) throw Error(ErrorCode::kInvalidInput, "problem needs 'start'");
  p.start = PoseFromJson(j.at("start"));
  if (j.contains("goal")) p.goal = PoseFromJson(j.at("goal"));
  if (j.contains("params")) ParamsFromJson(j.at("params"), &p.params);
  return p;
}

Problem LoadProblem(const std::string& path) {
  return ProblemFromJson(ReadJsonFile(path), DirName(path));
}

json TrajectoryToJson(const Trajectory& t, const ControlSet& u) {
  json segs = json::array();
  for (const Segment& s : t.segments()) {
    segs.push_back({{"control", s.control}, {"name", u.Label(s.control)},
                    {"duration", s.duration}});
  }
  return segs;
}

Trajectory TrajectoryFromJson(const json& j, const ControlSet& u) {
  if (!j.is_array()) throw Error(ErrorCode::kInvalidInput, "trajectory must be an array");
  std::vector<Segment> segs;
  for (const json& s : j) {
    if (!s.contains("control") || !s.at("control").is_number_integer()) {
      throw Error(ErrorCode::kInvalidInput, "segment needs integer 'control'");
    }
    segs.push_back({s.at("control").get<int>(), Number(s, "duration")});
  }
  Trajectory t(segs);
  t.Validate(u);
  return t;
}

json CertificateToJson(const ExtremalCertificate& c) {
  return {{"k", Vec3ToJson(c.k)},
          {"c", Vec3ToJson(c.c)},
          {"H", c.H},
          {"underdetermined", c.underdetermined}};
}

ExtremalCertificate CertificateFromJson(const json& j) {
  ExtremalCertificate c;
  c.k = Vec3FromJson(j.at("k"), "k");
  c.c = Vec3FromJson(j.at("c"), "c");
  if (j.contains("H")) c.H = Number(j, "H");
  return c;
}

json ReportToJson(const NecessaryConditionReport& r) {
  return {{"constant", r.constant},
          {"max_active_deviation", r.max_active_deviation},
          {"max_violation_by_inactive", r.max_violation_by_inactive}};
}

json ResultToJson(const Problem& problem, const SolveResult& r) {
  const ControlSet& u = problem.controls;
  const std::vector<int> word = r.trajectory.Word();
  json ties = json::array();
  for (const WordCandidate& t : r.ties) {
    ties.push_back({{"word", ControlSet::IndexWord(t.word)},
                    {"word_name", u.NamedWord(t.word)},
                    {"total_time", t.total_time},
                    {"trajectory", TrajectoryToJson(t.trajectory, u)}});
  }
  return {{"control_set", problem.control_json},
          {"start", PoseToJson(problem.start)},
          {"goal", PoseToJson(problem.goal)},
          {"word", ControlSet::IndexWord(word)},
          {"word_name", u.NamedWord(word)},
          {"total_time", r.total_time},
          {"goal_error", r.goal_error},
          {"verified", r.verified},
          {"trajectory", TrajectoryToJson(r.trajectory, u)},
          {"certificate", CertificateToJson(r.certificate)},
          {"report", ReportToJson(r.report)},
          {"ties", ties}};
}

json ClassificationToJson(const SwitchClassification& c, const ControlSet& u) {
  json out = {{"verdict", VerdictName(c.verdict)},
              {"hypothesis",
               {{"first", u.Label(c.hypothesis.first)},
                {"second", u.Label(c.hypothesis.second)},
                {"last", u.Label(c.hypothesis.last)}}}};
  out["k"] = c.cert ? Vec3ToJson(c.cert->k) : json(nullptr);
  out["c"] = c.cert ? Vec3ToJson(c.cert->c) : json(nullptr);
  out["delta_k"] = c.delta_k ? Vec3ToJson(*c.delta_k) : json(nullptr);
  out["tangent"] = c.tangent ? Vec3ToJson(*c.tangent) : json(nullptr);
  if (c.verdict == Verdict::kInterior) {
    out["first"] = u.Label(c.first_hint);
    out["last"] = u.Label(c.last_hint);
  }
  return out;
}

MapConfig MapConfigFromJson(const json& j, const std::string& base_dir) {
  if (!j.is_object()) throw Error(ErrorCode::kInvalidInput, "map config must be an object");
  MapConfig m;
  m.controls = ControlSetRef(j.at("control_set"), base_dir);
  m.params = DefaultMapParams();
  if (j.contains("theta")) m.theta = Number(j, "theta");
  if (j.contains("bounds")) {
    const json& b = j.at("bounds");
    if (!b.is_array() || b.size() != 4) {
      throw Error(ErrorCode::kInvalidInput, "bounds must be [x_min, x_max, y_min, y_max]");
    }
    m.bounds = {b[0].get<double>(), b[1].get<double>(), b[2].get<double>(),
                b[3].get<double>()};
  }
  if (j.contains("resolution")) m.resolution = Number(j, "resolution");
  if (!(m.resolution > 0.0)) throw Error(ErrorCode::kInvalidInput, "resolution must be positive");
  if (!(m.bounds.x_max > m.bounds.x_min) || !(m.bounds.y_max > m.bounds.y_min)) {
    throw Error(ErrorCode::kInvalidInput, "bounds are empty");
  }
  if (j.contains("params")) ParamsFromJson(j.at("params"), &m.params);
  if (j.contains("csv")) m.csv_path = j.at("csv").get<std::string>();
  if (j.contains("svg")) m.svg_path = j.at("svg").get<std::string>();
  if (j.contains("pixels_per_unit")) m.pixels_per_unit = Number(j, "pixels_per_unit");
  return m;
}

}  // namespace kinosynth
