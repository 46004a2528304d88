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

#include "mrdw/stats.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace mrdw {

namespace {

// Midranks (1-based) of the pooled values, and the tie-group sizes.
std::vector<double> midranks(const std::vector<double>& pooled,
                             std::vector<std::size_t>& tie_sizes) {
  const std::size_t n = pooled.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return pooled[i] < pooled[j];
  });
  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && pooled[order[j + 1]] == pooled[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    tie_sizes.push_back(j - i + 1);
    i = j + 1;
  }
  return ranks;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace

MannWhitneyResult mann_whitney_u(std::span<const double> a,
                                 std::span<const double> b) {
  if (a.empty() || b.empty()) {
    throw std::invalid_argument("Mann-Whitney needs two non-empty samples");
  }
  const std::size_t na = a.size();
  const std::size_t nb = b.size();
  const std::size_t n = na + nb;
  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  std::vector<std::size_t> ties;
  const std::vector<double> ranks = midranks(pooled, ties);

  const double offset = 0.5 * static_cast<double>(na) * static_cast<double>(na + 1);
  const double rank_sum_a = std::accumulate(ranks.begin(), ranks.begin() + na, 0.0);
  MannWhitneyResult r;
  r.u_a = rank_sum_a - offset;
  r.u_b = static_cast<double>(na * nb) - r.u_a;
  const double mu = 0.5 * static_cast<double>(na * nb);

  if (n <= kExactMannWhitneyLimit) {
    r.exact = true;
    std::size_t total = 0, ge = 0, le = 0;
    constexpr double eps = 1e-9;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      if (static_cast<std::size_t>(std::popcount(mask)) != na) continue;
      double sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (mask & (1u << i)) sum += ranks[i];
      }
      const double u = sum - offset;
      ++total;
      if (u >= r.u_a - eps) ++ge;
      if (u <= r.u_a + eps) ++le;
    }
    const double t = static_cast<double>(total);
    r.p_greater = static_cast<double>(ge) / t;
    r.p_less = static_cast<double>(le) / t;
    r.p_two_sided = std::min(1.0, 2.0 * std::min(r.p_greater, r.p_less));
    return r;
  }

  double tie_term = 0.0;
  for (const std::size_t t : ties) {
    const double td = static_cast<double>(t);
    tie_term += td * td * td - td;
  }
  const double nd = static_cast<double>(n);
  const double var = static_cast<double>(na * nb) / 12.0 *
                     ((nd + 1.0) - tie_term / (nd * (nd - 1.0)));
  if (!(var > 0.0)) {
    r.p_greater = r.p_less = r.p_two_sided = 1.0;
    return r;
  }
  const double sd = std::sqrt(var);
  r.p_greater = 1.0 - normal_cdf((r.u_a - mu - 0.5) / sd);
  r.p_less = normal_cdf((r.u_a - mu + 0.5) / sd);
  r.p_two_sided = std::min(1.0, 2.0 * std::min(r.p_greater, r.p_less));
  r.p_greater = std::min(1.0, r.p_greater);
  r.p_less = std::min(1.0, r.p_less);
  return r;
}

double bonferroni(double p, int comparisons) {
  return std::min(1.0, p * std::max(1, comparisons));
}

double quantile(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw std::invalid_argument("quantile of empty sample");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
}

Summary summarize(std::span<const double> values) {
  Summary s;
  s.n = values.size();
  if (values.empty()) return s;
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  s.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  s.min = v.front();
  s.max = v.back();
  s.q1 = quantile(v, 0.25);
  s.median = quantile(v, 0.5);
  s.q3 = quantile(v, 0.75);
  return s;
}

}  // namespace mrdw
