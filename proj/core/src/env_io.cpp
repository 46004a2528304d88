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

#include "mrdw/env_io.hpp"

#include <fstream>

namespace mrdw {

using nlohmann::json;

namespace {

Polygon polygon_from_json(const json& j, const std::string& what) {
  if (!j.is_array()) throw GeometryError(what + " must be an array of [x, y]");
  Polygon poly;
  for (const json& v : j) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() ||
        !v[1].is_number()) {
      throw GeometryError(what + " vertices must be [x, y] number pairs");
    }
    poly.push_back({v[0].get<double>(), v[1].get<double>()});
  }
  return poly;
}

json polygon_to_json(const Polygon& poly) {
  json out = json::array();
  for (const Point2& p : poly) out.push_back({p.x, p.y});
  return out;
}

}  // namespace

PhysEnv env_from_json(const json& doc, std::optional<double> clearance_override) {
  if (!doc.is_object() || !doc.contains("boundary")) {
    throw GeometryError("environment needs a \"boundary\" polygon");
  }
  Polygon boundary = polygon_from_json(doc.at("boundary"), "boundary");
  std::vector<Polygon> obstacles;
  if (doc.contains("obstacles")) {
    const json& obs = doc.at("obstacles");
    if (!obs.is_array()) throw GeometryError("\"obstacles\" must be an array");
    for (std::size_t i = 0; i < obs.size(); ++i) {
      obstacles.push_back(polygon_from_json(obs[i], "obstacle " + std::to_string(i)));
    }
  }
  double clearance = PhysEnv::kDefaultClearance;
  if (doc.contains("clearance")) {
    if (!doc.at("clearance").is_number()) {
      throw GeometryError("\"clearance\" must be a number");
    }
    clearance = doc.at("clearance").get<double>();
  }
  if (clearance_override) clearance = *clearance_override;
  return PhysEnv(std::move(boundary), std::move(obstacles), clearance);
}

PhysEnv load_env(const std::filesystem::path& path,
                 std::optional<double> clearance_override) {
  std::ifstream in(path);
  if (!in) throw GeometryError("cannot open environment file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw GeometryError(path.string() + ": " + e.what());
  }
  try {
    return env_from_json(doc, clearance_override);
  } catch (const GeometryError& e) {
    throw GeometryError(path.string() + ": " + e.what());
  }
}

json env_to_json(const PhysEnv& env) {
  json obstacles = json::array();
  for (const Polygon& o : env.obstacles()) obstacles.push_back(polygon_to_json(o));
  return {{"boundary", polygon_to_json(env.boundary())},
          {"obstacles", obstacles},
          {"clearance", env.clearance()}};
}

PhysEnv rectangle_env(double width, double height, double clearance) {
  const double hx = 0.5 * width;
  const double hy = 0.5 * height;
  return PhysEnv({{-hx, -hy}, {hx, -hy}, {hx, hy}, {-hx, hy}}, {}, clearance);
}

}  // namespace mrdw
