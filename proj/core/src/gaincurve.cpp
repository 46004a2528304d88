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

#include "mrdw/gaincurve.hpp"

#include <cmath>
#include <fmt/format.h>
#include <numbers>
#include <stdexcept>

#include "mrdw/geom.hpp"

namespace mrdw {

std::optional<std::string> GainBounds::check() const {
  if (!(g_t_min > 0.0 && g_t_min <= 1.0 && g_t_max >= 1.0)) {
    return fmt::format("translation gain bounds [{}, {}] must satisfy "
                       "0 < min <= 1 <= max",
                       g_t_min, g_t_max);
  }
  if (!(radius_min > 0.0) || !std::isfinite(radius_min)) {
    return fmt::format("curvature radius minimum {} must be positive",
                       radius_min);
  }
  return std::nullopt;
}

std::vector<double> candidate_alphas(int k) {
  if (k < 1) throw std::invalid_argument("candidate count k must be >= 1");
  std::vector<double> alphas;
  alphas.reserve(2 * static_cast<std::size_t>(k));
  for (int i = 1; i <= 2 * k; ++i) {
    const double sign = (i - 1) % 2 == 0 ? 1.0 : -1.0;
    const double angle = std::numbers::pi / (2.0 * k) * ((i - 1) / 2);
    alphas.push_back(sign / std::cos(angle));
  }
  return alphas;
}

std::vector<CurvatureCandidate> candidate_paths(int k,
                                                const GainBounds& bounds) {
  std::vector<CurvatureCandidate> out;
  const std::vector<double> alphas = candidate_alphas(k);
  out.reserve(alphas.size() + 1);
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    out.push_back({static_cast<int>(i) + 1, alphas[i],
                   Curvature::radius(alphas[i] * bounds.radius_min)});
  }
  out.push_back({2 * k + 1, kInf, Curvature::straight()});
  return out;
}

std::vector<std::string> validate(const RedirectionCommand& cmd,
                                  const GainBounds& bounds) {
  std::vector<std::string> problems;
  if (!std::isfinite(cmd.g_t)) {
    problems.push_back("translation gain is not finite");
  } else if (cmd.g_t < bounds.g_t_min - 1e-12) {
    problems.push_back(fmt::format("translation gain {} below minimum {}",
                                   cmd.g_t, bounds.g_t_min));
  } else if (cmd.g_t > bounds.g_t_max + 1e-12) {
    problems.push_back(fmt::format("translation gain {} exceeds maximum {}",
                                   cmd.g_t, bounds.g_t_max));
  }
  if (!cmd.curvature.is_straight()) {
    const double r = cmd.curvature.signed_radius();
    if (!std::isfinite(r)) {
      problems.push_back("curvature radius is not finite");
    } else if (std::abs(r) < bounds.radius_min * (1.0 - 1e-12)) {
      problems.push_back(fmt::format("curvature radius {} below minimum {}",
                                     std::abs(r), bounds.radius_min));
    }
  }
  if (cmd.reset_heading && !std::isfinite(*cmd.reset_heading)) {
    problems.push_back("reset heading is not finite");
  }
  return problems;
}

}  // namespace mrdw
