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

#include <span>

namespace mrdw {

struct MannWhitneyResult {
  /// Rank-sum statistic of the first sample (midranks for ties).
  double u_a = 0.0;
  double u_b = 0.0;
  /// P(U_a >= observed) under the null: first sample tends to be larger.
  double p_greater = 1.0;
  /// P(U_a <= observed) under the null.
  double p_less = 1.0;
  double p_two_sided = 1.0;
  /// True when p-values come from full enumeration.
  bool exact = false;
};

/// Samples with n_a + n_b <= this size get exact p-values.
inline constexpr std::size_t kExactMannWhitneyLimit = 12;

/// Mann-Whitney U test. Exact permutation distribution for small samples,
/// otherwise the normal approximation with tie and continuity corrections.
MannWhitneyResult mann_whitney_u(std::span<const double> a,
                                 std::span<const double> b);

/// min(1, p * comparisons).
double bonferroni(double p, int comparisons);

struct Summary {
  std::size_t n = 0;
  double mean = 0.0;
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
};

/// Quartiles by linear interpolation between order statistics.
Summary summarize(std::span<const double> values);

/// Quantile q in [0, 1] by linear interpolation between order statistics.
double quantile(std::span<const double> sorted, double q);

}  // namespace mrdw
