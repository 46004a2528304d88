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

#include <benchmark/benchmark.h>

#include <cmath>
#include <memory>

#include "mrdw/controller.hpp"
#include "mrdw/env_io.hpp"
#include "mrdw/horizon.hpp"
#include "mrdw/reach.hpp"
#include "mrdw/sim.hpp"

namespace {

using namespace mrdw;

const std::shared_ptr<const Room>& square_room() {
  static const auto room = [] {
    const PhysEnv env = rectangle_env(5, 5);
    return std::make_shared<const Room>(Room{env, SkeletonGrid::build(env, {})});
  }();
  return room;
}

std::vector<UserPlanInput> random_users(int n, Rng& rng) {
  const Room& room = *square_room();
  std::vector<UserPlanInput> users;
  for (int i = 0; i < n; ++i) {
    const Pose pose = sample_free_pose(room.env, rng);
    const double d = rng.uniform(2.0, 6.0), a = rng.uniform(0.0, kTwoPi);
    users.push_back({i, pose, {0, 0}, {d * std::cos(a), d * std::sin(a)}, 1.0, &room});
  }
  return users;
}

void BM_SkeletonBuild(benchmark::State& state) {
  const PhysEnv env = rectangle_env(5, 5);
  SkeletonParams params;
  params.delta = 0.5;
  params.lambda = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(SkeletonGrid::build(env, params, 1));
  }
}
BENCHMARK(BM_SkeletonBuild)->Arg(30)->Unit(benchmark::kMillisecond);

void BM_WalkTimes(benchmark::State& state) {
  const PhysEnv env = rectangle_env(5, 5);
  const GainBounds bounds;
  const auto candidates = candidate_paths(static_cast<int>(state.range(0)), bounds);
  Rng rng(1, 0);
  for (auto _ : state) {
    state.PauseTiming();
    const Pose pose = sample_free_pose(env, rng);
    state.ResumeTiming();
    benchmark::DoNotOptimize(walk_times(pose, 1.0, env, candidates, bounds));
  }
}
BENCHMARK(BM_WalkTimes)->Arg(10)->Arg(40);

void BM_PlanTo(benchmark::State& state) {
  const PhysEnv env = rectangle_env(5, 5);
  const GainBounds bounds;
  Rng rng(2, 0);
  for (auto _ : state) {
    state.PauseTiming();
    const Point2 p = sample_free_pose(env, rng).position();
    const Point2 q = sample_free_pose(env, rng).position();
    state.ResumeTiming();
    benchmark::DoNotOptimize(plan_to(p, q, 3.0, 1.0, env, bounds));
  }
}
BENCHMARK(BM_PlanTo);

void BM_PlanCommonReset(benchmark::State& state) {
  const RdwController controller(ControllerParams{});
  Rng rng(3, 0);
  for (auto _ : state) {
    state.PauseTiming();
    const auto users = random_users(static_cast<int>(state.range(0)), rng);
    state.ResumeTiming();
    benchmark::DoNotOptimize(controller.plan_common_reset(users));
  }
}
BENCHMARK(BM_PlanCommonReset)->Arg(2)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_Trial(benchmark::State& state) {
  TrialConfig cfg;
  cfg.method = static_cast<Method>(state.range(0));
  cfg.users = {{square_room(), 1.0, std::nullopt}, {square_room(), 1.0, std::nullopt}};
  cfg.distance_threshold = 100.0;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    cfg.seed = seed++;
    benchmark::DoNotOptimize(run_trial(cfg));
  }
}
BENCHMARK(BM_Trial)
    ->Arg(static_cast<int>(Method::kOurs))
    ->Arg(static_cast<int>(Method::kS2C))
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
