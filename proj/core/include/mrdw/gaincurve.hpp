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

#include <optional>
#include <string>
#include <vector>

namespace mrdw {

/// Perceptual limits for translation and curvature gains.
struct GainBounds {
  double g_t_min = 0.86;
  double g_t_max = 1.26;
  /// Smallest curvature-gain radius, meters.
  double radius_min = 7.5;

  /// Empty if the bounds are consistent, otherwise a description.
  std::optional<std::string> check() const;
};

/// Constant curvature applied over a walking segment. Straight is a distinct
/// state rather than an enormous radius.
class Curvature {
 public:
  static Curvature straight() { return Curvature(0.0); }
  static Curvature radius(double signed_radius) {
    return Curvature(signed_radius);
  }

  bool is_straight() const { return radius_ == 0.0; }
  /// Signed radius, > 0 bends left. Meaningless when straight.
  double signed_radius() const { return radius_; }

  bool operator==(const Curvature&) const = default;

 private:
  explicit Curvature(double r) : radius_(r) {}
  double radius_;
};

/// One member of the scanning family: index in [1, 2k + 1], the last one
/// being the straight path.
struct CurvatureCandidate {
  int index = 0;
  /// Signed multiple of radius_min; infinite for the straight candidate.
  double alpha = 0.0;
  Curvature curvature = Curvature::straight();
};

/// alpha_i = (-1)^(i-1) / cos(pi/(2k) * floor((i-1)/2)), i = 1..2k.
std::vector<double> candidate_alphas(int k);

/// 2k curved candidates with radius alpha_i * radius_min, then the straight
/// candidate.
std::vector<CurvatureCandidate> candidate_paths(int k,
                                                const GainBounds& bounds);

/// Steering decision for one user over one walking segment.
struct RedirectionCommand {
  /// Physical heading after the reset, if this command starts with one.
  std::optional<double> reset_heading;
  Curvature curvature = Curvature::straight();
  double g_t = 1.0;
};

/// Empty when `cmd` respects `bounds`; otherwise one message per violation.
std::vector<std::string> validate(const RedirectionCommand& cmd,
                                  const GainBounds& bounds);

}  // namespace mrdw
