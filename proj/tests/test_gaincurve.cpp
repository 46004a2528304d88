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

#include <doctest.h>

#include <cmath>

#include "mrdw/gaincurve.hpp"

using namespace mrdw;

TEST_CASE("candidate alphas for k = 10") {
  const std::vector<double> a = candidate_alphas(10);
  REQUIRE(a.size() == 20);
  CHECK(a[0] == 1.0);
  CHECK(a[1] == -1.0);
  CHECK(a[2] == doctest::Approx(1.01247).epsilon(1e-5));
  CHECK(a[19] == doctest::Approx(-6.39245).epsilon(1e-5));
  CHECK(a[19] == doctest::Approx(-1.0 / std::cos(9.0 * M_PI / 20.0)));
}

TEST_CASE("candidate alphas alternate and grow pairwise") {
  for (int k = 1; k <= 30; ++k) {
    const std::vector<double> a = candidate_alphas(k);
    REQUIRE(a.size() == static_cast<std::size_t>(2 * k));
    for (int j = 0; j < k; ++j) {
      CHECK(a[2 * j] > 0.0);
      CHECK(a[2 * j] == -a[2 * j + 1]);
      CHECK(std::abs(a[2 * j]) >= 1.0);
      if (j > 0) CHECK(std::abs(a[2 * j]) > std::abs(a[2 * j - 2]));
    }
  }
  CHECK_THROWS(candidate_alphas(0));
}

TEST_CASE("candidate paths") {
  const GainBounds bounds;
  const auto c10 = candidate_paths(10, bounds);
  REQUIRE(c10.size() == 21);
  CHECK(c10.back().curvature.is_straight());
  CHECK(std::isinf(c10.back().alpha));
  CHECK(c10.back().index == 21);
  double max_radius = 0.0;
  for (std::size_t i = 0; i + 1 < c10.size(); ++i) {
    CHECK(c10[i].index == static_cast<int>(i) + 1);
    CHECK(std::abs(c10[i].curvature.signed_radius()) >= bounds.radius_min);
    CHECK(c10[i].curvature.signed_radius() == c10[i].alpha * bounds.radius_min);
    max_radius = std::max(max_radius, std::abs(c10[i].curvature.signed_radius()));
  }
  CHECK(max_radius == doctest::Approx(47.943).epsilon(1e-4));

  const auto c1 = candidate_paths(1, bounds);
  REQUIRE(c1.size() == 3);
  CHECK(c1[0].curvature.signed_radius() == 7.5);
  CHECK(c1[1].curvature.signed_radius() == -7.5);
  CHECK(c1[2].curvature.is_straight());
}

TEST_CASE("validate commands") {
  const GainBounds bounds;
  CHECK(validate({std::nullopt, Curvature::straight(), 1.0}, bounds).empty());
  CHECK(validate({0.3, Curvature::radius(-7.5), 0.86}, bounds).empty());
  CHECK(validate({std::nullopt, Curvature::radius(1e4), 1.26}, bounds).empty());
  CHECK(validate({std::nullopt, Curvature::straight(), 1.5}, bounds).size() == 1);
  CHECK(validate({std::nullopt, Curvature::straight(), 0.5}, bounds).size() == 1);
  CHECK(validate({std::nullopt, Curvature::radius(5.0), 1.0}, bounds).size() == 1);
  CHECK(validate({std::nullopt, Curvature::radius(-5.0), 2.0}, bounds).size() == 2);
  CHECK_FALSE(validate({std::nullopt, Curvature::straight(), NAN}, bounds).empty());
}

TEST_CASE("gain bounds consistency") {
  CHECK_FALSE(GainBounds{}.check());
  CHECK(GainBounds{1.1, 1.26, 7.5}.check());
  CHECK(GainBounds{0.86, 0.9, 7.5}.check());
  CHECK(GainBounds{0.86, 1.26, 0.0}.check());
  CHECK(GainBounds{0.0, 1.26, 7.5}.check());
}
