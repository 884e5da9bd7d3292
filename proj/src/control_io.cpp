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

#include "kinosynth/control_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "kinosynth/errors.hpp"

namespace kinosynth {

using nlohmann::json;

Vec3 Vec3FromJson(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 3) {
    throw Error(ErrorCode::kParse, std::string(what) + " must be [x, y, z]");
  }
  Vec3 v;
  for (int i = 0; i < 3; ++i) {
    if (!j[i].is_number()) {
      throw Error(ErrorCode::kParse, std::string(what) + " must be numeric");
    }
    v[i] = j[i].get<double>();
  }
  return v;
}

json Vec3ToJson(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

ControlSet ControlSetFromJson(const json& j) {
  if (!j.is_object() || !j.contains("controls") || !j["controls"].is_array()) {
    throw Error(ErrorCode::kParse, "control set needs a \"controls\" array");
  }
  std::vector<Control> controls;
  for (const json& c : j["controls"]) {
    const std::string type = c.value("type", "");
    const std::string name = c.value("name", "");
    if (c.contains("pitch") && c["pitch"].is_number() &&
        c["pitch"].get<double>() != 0.0) {
      throw Error(ErrorCode::kInvalidInput, "screw motions are not supported");
    }
    if (type == "translation") {
      controls.push_back(Control::Translation(Vec3FromJson(c.at("v"), "v"), name));
    } else if (type == "rotation") {
      if (!c.contains("omega") || !c["omega"].is_number()) {
        throw Error(ErrorCode::kParse, "rotation needs numeric omega");
      }
      Vec3 axis = Vec3FromJson(c.at("axis"), "axis");
      if (std::abs(axis.norm() - 1.0) > kExternalTol) {
        throw Error(ErrorCode::kInvalidInput, "rotation axis must be unit length");
      }
      controls.push_back(Control::Rotation(
          axis.normalized(), Vec3FromJson(c.at("center"), "center"),
          c["omega"].get<double>(), name));
    } else {
      throw Error(ErrorCode::kInvalidInput, "unknown control type '" + type + "'");
    }
  }
  return ControlSet(std::move(controls), j.value("name", ""));
}

json ControlSetToJson(const ControlSet& u) {
  json out;
  out["name"] = u.name();
  out["controls"] = json::array();
  for (const Control& c : u.controls()) {
    json e;
    if (c.is_translation()) {
      e["type"] = "translation";
      e["v"] = Vec3ToJson(c.v);
    } else {
      e["type"] = "rotation";
      e["axis"] = Vec3ToJson(c.axis);
      e["center"] = Vec3ToJson(c.center);
      e["omega"] = c.omega;
    }
    if (!c.name.empty()) e["name"] = c.name;
    out["controls"].push_back(e);
  }
  return out;
}

json ReadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kParse, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // Translate the byte offset into line/column for the diagnostic.
    size_t line = 1, col = 1;
    for (size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(ErrorCode::kParse, path + ":" + std::to_string(line) + ":" +
                                       std::to_string(col) + ": " + e.what());
  }
}

ControlSet LoadControlSet(const std::string& path) {
  return ControlSetFromJson(ReadJsonFile(path));
}

}  // namespace kinosynth
