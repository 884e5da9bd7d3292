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

#ifndef KINOSYNTH_CONTROL_IO_HPP_
#define KINOSYNTH_CONTROL_IO_HPP_

#include <string>

#include "json.hpp"
#include "kinosynth/control.hpp"

namespace kinosynth {

// {"name": ..., "controls": [{"type": "translation", "v": [..]} |
//  {"type": "rotation", "axis": [..], "center": [..], "omega": w}]}
// Screw motions (nonzero "pitch" or type "screw") are rejected.
ControlSet ControlSetFromJson(const nlohmann::json& j);
nlohmann::json ControlSetToJson(const ControlSet& u);

// Throws kParse with line/column on malformed JSON.
nlohmann::json ReadJsonFile(const std::string& path);
ControlSet LoadControlSet(const std::string& path);

Vec3 Vec3FromJson(const nlohmann::json& j, const char* what);
nlohmann::json Vec3ToJson(const Vec3& v);

}  // namespace kinosynth

#endif  // KINOSYNTH_CONTROL_IO_HPP_
