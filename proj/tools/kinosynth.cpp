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

// Command-line front end: solve, oracle, switch-test, synth-map, check.
//
// Exit codes: 0 success, 1 input error, 2 no path at this resolution,
// 3 verification failure.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "kinosynth/control_io.hpp"
#include "kinosynth/dubins.hpp"
#include "kinosynth/errors.hpp"
#include "kinosynth/extremal.hpp"
#include "kinosynth/problem_io.hpp"
#include "kinosynth/solver.hpp"
#include "kinosynth/switching.hpp"
#include "kinosynth/synthesis.hpp"

namespace {

using nlohmann::json;
using namespace kinosynth;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitNoPath = 2;
constexpr int kExitVerify = 3;

struct Overrides {
  int threads = -1;
  int angle_cells = -1;
  int offset_cells = -1;
  int max_segments = -1;
  double eps_goal = -1.0;

  void Add(CLI::App* cmd) {
    cmd->add_option("--threads", threads, "Worker threads (KINOSYNTH_THREADS wins)");
    cmd->add_option("--angle-cells", angle_cells, "Planar k-direction grid size");
    cmd->add_option("--offset-cells", offset_cells, "Planar c-offset grid size");
    cmd->add_option("--max-segments", max_segments, "Longest word accepted");
    cmd->add_option("--eps-goal", eps_goal, "Goal tolerance (three-point sum)");
  }
  void Apply(SolverParams* p) const {
    json j = json::object();
    if (threads >= 0) j["threads"] = threads;
    if (angle_cells >= 0) j["angle_cells"] = angle_cells;
    if (offset_cells >= 0) j["offset_cells"] = offset_cells;
    if (max_segments >= 0) j["max_segments"] = max_segments;
    if (eps_goal >= 0.0) j["eps_goal"] = eps_goal;
    ParamsFromJson(j, p);
  }
};

void WriteText(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  out.close();
  if (!out) throw Error(ErrorCode::kInvalidInput, "cannot write " + path);
}

PlanarState State(const std::vector<double>& v) { return {v[0], v[1], v[2]}; }

int RunSolve(const std::string& path, const std::string& out_path,
             const Overrides& ov) {
  Problem problem = LoadProblem(path);
  ov.Apply(&problem.params);
  try {
    const SolveResult r =
        SolveShortest(problem.start, problem.goal, problem.controls, problem.params);
    WriteText(out_path, ResultToJson(problem, r).dump(2) + "\n");
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kNoPathFound) {
      std::cerr << "no path: " << e.what() << "\n";
      return kExitNoPath;
    }
    throw;
  }
  return kExitOk;
}

int RunOracle(const std::vector<double>& start, const std::vector<double>& goal) {
  const std::vector<DubinsWord> all = DubinsCandidates(State(start), State(goal));
  const DubinsWord best = DubinsShortest(State(start), State(goal));
  std::printf("word %s\n", best.Canonical().c_str());
  std::printf("type %s\n", DubinsTypeName(best.type));
  std::printf("params %.9f %.9f %.9f\n", best.t, best.p, best.q);
  std::printf("length %.9f\n", best.length);
  std::vector<std::string> tied;
  for (const DubinsWord& w : all) {
    if (w.length - best.length <= kDubinsTieTol) {
      const std::string c = w.Canonical();
      if (std::find(tied.begin(), tied.end(), c) == tied.end()) tied.push_back(c);
    }
  }
  std::sort(tied.begin(), tied.end());
  if (tied.size() > 1) {
    std::printf("tied");
    for (const std::string& t : tied) std::printf(" %s", t.c_str());
    std::printf("\n");
  }
  return kExitOk;
}

int ControlIndex(const ControlSet& u, const std::string& name) {
  for (int i = 0; i < u.size(); ++i) {
    if (u.Label(i) == name || std::to_string(i) == name) return i;
  }
  throw Error(ErrorCode::kInvalidInput, "unknown control '" + name + "'");
}

int RunSwitchTest(const std::vector<double>& pose, const std::string& controls,
                  const std::vector<double>& goal,
                  const std::vector<std::string>& hypothesis) {
  const ControlSet u = LoadControlSet(controls);
  const Pose q = Pose::Planar(pose[0], pose[1], pose[2]);
  const Pose g = Pose::Planar(goal[0], goal[1], goal[2]);
  std::optional<std::vector<Hypothesis>> hyps;
  if (!hypothesis.empty()) {
    if (hypothesis.size() != 3) {
      throw Error(ErrorCode::kInvalidInput, "--hypothesis takes first second last");
    }
    hyps = std::vector<Hypothesis>{{ControlIndex(u, hypothesis[0]),
                                    ControlIndex(u, hypothesis[1]),
                                    ControlIndex(u, hypothesis[2])}};
  }
  const SwitchClassification c = ClassifyConfiguration(q, u, g, hyps);
  std::cout << ClassificationToJson(c, u).dump(2) << "\n";
  return kExitOk;
}

int RunSynthMap(const std::string& path, std::string csv, std::string svg,
                std::optional<double> resolution, const Overrides& ov) {
  MapConfig cfg = MapConfigFromJson(ReadJsonFile(path), DirName(path));
  if (resolution) {
    if (!(*resolution > 0.0)) throw Error(ErrorCode::kInvalidInput, "resolution must be positive");
    cfg.resolution = *resolution;
  }
  ov.Apply(&cfg.params);
  if (csv.empty()) csv = cfg.csv_path;
  if (svg.empty()) svg = cfg.svg_path;
  const SynthesisMap map = MapSlice(cfg.controls, RotationMatrix::FromYaw(cfg.theta),
                                    cfg.bounds, cfg.resolution, cfg.params);
  WriteText(csv, MapToCsv(map));
  if (!svg.empty()) WriteText(svg, MapToSvg(map, cfg.pixels_per_unit));
  return kExitOk;
}

int RunCheck(const std::string& path, const std::vector<double>& k,
             const std::vector<double>& c, double tol) {
  const json j = ReadJsonFile(path);
  const ControlSet u = ControlSetRef(j.at("control_set"), DirName(path));
  const Pose start = PoseFromJson(j.at("start"));
  const Pose goal = j.contains("goal") ? PoseFromJson(j.at("goal")) : Pose{};
  const Trajectory traj = j.contains("trajectory")
                              ? TrajectoryFromJson(j.at("trajectory"), u)
                              : Trajectory();
  ExtremalCertificate cert;
  if (j.contains("certificate")) cert = CertificateFromJson(j.at("certificate"));
  if (!k.empty()) cert.k = Vec3(k[0], k[1], k[2]);
  if (!c.empty()) cert.c = Vec3(c[0], c[1], c[2]);

  const PointConfiguration q0 = ConfigFromPose(start);
  const NecessaryConditionReport rep =
      VerifyNecessaryCondition(cert, q0, traj, u, goal.position, tol);
  json out = {{"segments", traj.size()}, {"report", ReportToJson(rep)}};
  if (!traj.empty()) {
    const std::vector<double> h = HProfile(cert, q0, traj, u, goal.position, 64);
    out["h_min"] = *std::min_element(h.begin(), h.end());
    out["h_max"] = *std::max_element(h.begin(), h.end());
    out["samples"] = h.size();
  }
  const bool ok = rep.constant && rep.max_violation_by_inactive <= tol;
  out["ok"] = ok;
  std::cout << out.dump(2) << "\n";
  return ok ? kExitOk : kExitVerify;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-optimal rigid-body paths from constant multipliers"};
  app.require_subcommand(1);

  Overrides ov;
  std::string solve_in, solve_out;
  auto* solve = app.add_subcommand("solve", "Shortest path for a problem file");
  solve->add_option("problem", solve_in, "Problem JSON")->required();
  solve->add_option("-o,--output", solve_out, "Result JSON (default stdout)");
  ov.Add(solve);

  std::vector<double> o_start, o_goal{0.0, 0.0, 0.0};
  auto* oracle = app.add_subcommand("oracle", "Closed-form Dubins shortest word");
  oracle->add_option("--start", o_start, "x y theta")->expected(3)->required();
  oracle->add_option("--goal", o_goal, "x y theta (default origin)")->expected(3);

  std::vector<double> s_pose, s_goal{0.0, 0.0, 0.0};
  std::string s_controls;
  std::vector<std::string> s_hyp;
  auto* sw = app.add_subcommand("switch-test", "Classify a configuration");
  sw->add_option("--pose", s_pose, "x y theta")->expected(3)->required();
  sw->add_option("--controls", s_controls, "Control-set JSON")->required();
  sw->add_option("--goal", s_goal, "x y theta (default origin)")->expected(3);
  sw->add_option("--hypothesis", s_hyp, "first second last (names or indices)")
      ->expected(3);

  std::string m_config, m_csv, m_svg;
  double m_res = 0.0;
  Overrides mov;
  auto* synth = app.add_subcommand("synth-map", "Rasterize a synthesis slice");
  synth->add_option("config", m_config, "Map config JSON")->required();
  synth->add_option("--csv", m_csv, "CSV output (default from config, else stdout)");
  synth->add_option("--svg", m_svg, "SVG output");
  auto* res_opt = synth->add_option("--resolution", m_res, "Override cell size");
  mov.Add(synth);

  std::string c_in;
  std::vector<double> c_k, c_c;
  double c_tol = 1e-6;
  auto* check = app.add_subcommand("check", "Verify a certificate along a trajectory");
  check->add_option("trajectory", c_in, "Result or trajectory JSON")->required();
  check->add_option("--k", c_k, "Override k")->expected(3);
  check->add_option("--c", c_c, "Override c")->expected(3);
  check->add_option("--tol", c_tol, "Tolerance on H");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*solve) return RunSolve(solve_in, solve_out, ov);
    if (*oracle) return RunOracle(o_start, o_goal);
    if (*sw) return RunSwitchTest(s_pose, s_controls, s_goal, s_hyp);
    if (*synth) return RunSynthMap(m_config, m_csv, m_svg,
                                       res_opt->count() ? std::optional<double>(m_res)
                                                        : std::nullopt,
                                       mov);
    if (*check) return RunCheck(c_in, c_k, c_c, c_tol);
  } catch (const Error& e) {
    std::cerr << "error [" << ErrorCodeName(e.code()) << "]: " << e.what() << "\n";
    return e.code() == ErrorCode::kNoPathFound ? kExitNoPath : kExitInput;
  } catch (const json::exception& e) {
    std::cerr << "error [parse]: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
