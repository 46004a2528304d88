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

#include "mrdw/horizon.hpp"

#include <cmath>
#include <stdexcept>

namespace mrdw {

bool gentler(const CurvatureCandidate& a, const CurvatureCandidate& b) {
  const double ma = std::abs(a.alpha);
  const double mb = std::abs(b.alpha);
  if (ma != mb) return ma > mb;
  return a.alpha > b.alpha;
}

namespace {

bool times_tie(double a, double b) {
  if (std::isinf(a) || std::isinf(b)) return a == b;
  return std::abs(a - b) <= kTimeTieTolerance;
}

}  // namespace

HorizonReport walk_times(const Pose& pose, double v, const PhysEnv& env,
                         std::span<const CurvatureCandidate> candidates,
                         const GainBounds& bounds) {
  if (!(v > 0.0)) throw std::invalid_argument("walking speed must be > 0");
  if (candidates.empty()) throw std::invalid_argument("no candidates");
  if (!env.in_free_space(pose.position())) {
    throw PoseOutsideFreeSpace(pose.position());
  }

  HorizonReport report;
  report.lengths.reserve(candidates.size());
  report.times.reserve(candidates.size());
  for (const CurvatureCandidate& c : candidates) {
    const double len =
        c.curvature.is_straight()
            ? first_hit_straight(pose, env)
            : first_hit_arc(pose, c.curvature.signed_radius(), env);
    report.lengths.push_back(len);
    report.times.push_back(len / v);
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const double ti = report.times[i];
    const double tb = report.times[best];
    if (times_tie(ti, tb)) {
      if (gentler(candidates[i], candidates[best])) best = i;
    } else if (ti > tb) {
      best = i;
    }
  }
  report.best = best;
  report.best_candidate = candidates[best];
  report.t_max = report.times[best] * bounds.g_t_max;
  return report;
}

OrientationScan t_max_over_orientations(
    Point2 position, double v, const PhysEnv& env,
    std::span<const double> orientations,
    std::span<const CurvatureCandidate> candidates, const GainBounds& bounds) {
  if (orientations.empty()) throw std::invalid_argument("no orientations");
  OrientationScan scan;
  scan.t_max = -1.0;
  for (std::size_t i = 0; i < orientations.size(); ++i) {
    const HorizonReport r =
        walk_times(Pose(position, orientations[i]), v, env, candidates, bounds);
    if (r.t_max > scan.t_max) {
      scan = {Pose(position, orientations[i]).heading(), i, r.t_max,
              r.best_candidate};
    }
  }
  return scan;
}

std::vector<double> skeleton_orientations(int lambda) {
  if (lambda < 1) throw std::invalid_argument("lambda must be >= 1");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(lambda));
  for (int i = 1; i <= lambda; ++i) {
    out.push_back(normalize_angle(kTwoPi * (static_cast<double>(i) / lambda)));
  }
  return out;
}

}  // namespace mrdw
