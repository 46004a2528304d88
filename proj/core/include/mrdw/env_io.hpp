// Copyright 2026 The mrdw Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <optional>

#include <nlohmann/json.hpp>

#include "mrdw/geom.hpp"

namespace mrdw {

/// Parses {"boundary": [[x,y],...], "obstacles": [[[x,y],...],...],
/// "clearance": c}. `obstacles` and `clearance` are optional. Throws
/// GeometryError for malformed documents or invalid geometry.
PhysEnv env_from_json(const nlohmann::json& doc,
                      std::optional<double> clearance_override = std::nullopt);
PhysEnv load_env(const std::filesystem::path& path,
                 std::optional<double> clearance_override = std::nullopt);
nlohmann::json env_to_json(const PhysEnv& env);

/// Axis-aligned rectangle centered at the origin.
PhysEnv rectangle_env(double width, double height,
                      double clearance = PhysEnv::kDefaultClearance);

}  // namespace mrdw
