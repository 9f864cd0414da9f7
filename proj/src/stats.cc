// Copyright 2026 The tf-lifeline Authors
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

#include "tflifeline/stats.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "absl/strings/str_cat.h"

namespace tflife {
namespace {

absl::Status CheckSample(std::span<const double> s, absl::string_view name) {
  if (s.empty()) return absl::InvalidArgumentError(absl::StrCat("empty sample ", name));
  for (double v : s) {
    if (!std::isfinite(v)) {
      return absl::InvalidArgumentError(absl::StrCat("non-finite value in sample ", name));
    }
  }
  return absl::OkStatus();
}

struct Ranked {
  std::vector<int64_t> doubled_ranks;  // 2 * midrank, in pooled input order
  double tie_term = 0.0;               // sum of t^3 - t over tie groups
};

// Pooled midranks of a followed by b, doubled so they stay integral.
Ranked RankPooled(std::span<const double> a, std::span<const double> b) {
  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  std::vector<size_t> order(pooled.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t i, size_t j) { return pooled[i] < pooled[j]; });
  Ranked r;
  r.doubled_ranks.resize(pooled.size());
  for (size_t i = 0; i < order.size();) {
    size_t j = i;
    while (j + 1 < order.size() && pooled[order[j + 1]] == pooled[order[i]]) ++j;
    // positions i..j (0-based) share rank ((i+1) + (j+1)) / 2
    const int64_t doubled = static_cast<int64_t>(i + j + 2);
    for (size_t k = i; k <= j; ++k) r.doubled_ranks[order[k]] = doubled;
    const double t = static_cast<double>(j - i + 1);
    r.tie_term += t * t * t - t;
    i = j + 1;
  }
  return r;
}

double NormalUpperTail(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

// Number of k-subsets of `ranks` per rank sum: ways[s] for s in [0, max_sum].
std::vector<double> SubsetSumCounts(const std::vector<int64_t>& ranks, int k) {
  std::vector<int64_t> sorted = ranks;
  std::sort(sorted.rbegin(), sorted.rend());
  int64_t max_sum = 0;
  for (int i = 0; i < k; ++i) max_sum += sorted[i];
  // table[j][s]: ways to pick j items with sum s
  std::vector<std::vector<double>> table(k + 1, std::vector<double>(max_sum + 1, 0.0));
  table[0][0] = 1.0;
  int taken = 0;
  for (int64_t r : ranks) {
    taken = std::min(taken + 1, k);
    for (int j = taken; j >= 1; --j) {
      std::vector<double>& row = table[j];
      const std::vector<double>& prev = table[j - 1];
      for (int64_t s = max_sum; s >= r; --s) row[s] += prev[s - r];
    }
  }
  return table[k];
}

}  // namespace

absl::string_view SidednessName(Sidedness s) {
  switch (s) {
    case Sidedness::kOneSidedGreater:
      return "greater";
    case Sidedness::kOneSidedLess:
      return "less";
    case Sidedness::kTwoSided:
      return "two_sided";
  }
  return "unknown";
}

absl::StatusOr<TestResult> MannWhitney(std::span<const double> a, std::span<const double> b,
                                       Sidedness sided, const MannWhitneyOptions& options) {
  if (absl::Status s = CheckSample(a, "a"); !s.ok()) return s;
  if (absl::Status s = CheckSample(b, "b"); !s.ok()) return s;
  const auto n = static_cast<int64_t>(a.size());
  const auto m = static_cast<int64_t>(b.size());
  const int64_t total = n + m;
  const Ranked ranked = RankPooled(a, b);

  int64_t doubled_sum_a = 0;
  for (int64_t i = 0; i < n; ++i) doubled_sum_a += ranked.doubled_ranks[i];
  TestResult result;
  result.sided = sided;
  result.statistic = static_cast<double>(doubled_sum_a) / 2.0 - n * (n + 1) / 2.0;

  if (std::min(n, m) <= options.exact_max_group) {
    // Enumerate over the smaller group; its rank sum mirrors a's.
    const bool use_a = n <= m;
    const int k = static_cast<int>(use_a ? n : m);
    const int64_t grand = total * (total + 1);  // sum of all doubled ranks
    const int64_t observed = use_a ? doubled_sum_a : grand - doubled_sum_a;
    const std::vector<double> ways = SubsetSumCounts(ranked.doubled_ranks, k);
    double all = 0, at_least = 0, at_most = 0;
    for (int64_t s = 0; s < static_cast<int64_t>(ways.size()); ++s) {
      all += ways[s];
      if (s >= observed) at_least += ways[s];
      if (s <= observed) at_most += ways[s];
    }
    // Large sums of the enumerated group mean large values in that group.
    double upper_a = at_least / all;
    double lower_a = at_most / all;
    if (!use_a) std::swap(upper_a, lower_a);
    switch (sided) {
      case Sidedness::kOneSidedGreater:
        result.p_value = upper_a;
        break;
      case Sidedness::kOneSidedLess:
        result.p_value = lower_a;
        break;
      case Sidedness::kTwoSided:
        result.p_value = std::min(1.0, 2.0 * std::min(upper_a, lower_a));
        break;
    }
    result.exact = true;
    return result;
  }

  const double nd = static_cast<double>(n), md = static_cast<double>(m);
  const double td = static_cast<double>(total);
  const double mean = nd * md / 2.0;
  const double var =
      nd * md / 12.0 * ((td + 1.0) - ranked.tie_term / (td * (td - 1.0)));
  const double diff = result.statistic - mean;
  if (var <= 0) {
    result.p_value = 1.0;
    return result;
  }
  const double sd = std::sqrt(var);
  switch (sided) {
    case Sidedness::kOneSidedGreater:
      result.p_value = NormalUpperTail((diff - 0.5) / sd);
      break;
    case Sidedness::kOneSidedLess:
      result.p_value = NormalUpperTail((-diff - 0.5) / sd);
      break;
    case Sidedness::kTwoSided:
      result.p_value =
          std::min(1.0, 2.0 * NormalUpperTail((std::fabs(diff) - 0.5) / sd));
      break;
  }
  result.p_value = std::clamp(result.p_value, 0.0, 1.0);
  return result;
}

absl::string_view MagnitudeName(Magnitude m) {
  switch (m) {
    case Magnitude::kNegligible:
      return "negligible";
    case Magnitude::kSmall:
      return "small";
    case Magnitude::kMedium:
      return "medium";
    case Magnitude::kLarge:
      return "large";
  }
  return "unknown";
}

Magnitude MagnitudeOf(double delta, const CliffCutPoints& cuts) {
  const double d = std::fabs(delta);
  if (d < cuts.negligible) return Magnitude::kNegligible;
  if (d < cuts.small) return Magnitude::kSmall;
  if (d < cuts.medium) return Magnitude::kMedium;
  return Magnitude::kLarge;
}

absl::StatusOr<EffectSize> CliffsDelta(std::span<const double> a, std::span<const double> b,
                                       const CliffCutPoints& cuts) {
  if (absl::Status s = CheckSample(a, "a"); !s.ok()) return s;
  if (absl::Status s = CheckSample(b, "b"); !s.ok()) return s;
  // Sort b once and count with binary search: O((n + m) log m).
  std::vector<double> sorted_b(b.begin(), b.end());
  std::sort(sorted_b.begin(), sorted_b.end());
  int64_t dominance = 0;
  for (double x : a) {
    const auto below = std::lower_bound(sorted_b.begin(), sorted_b.end(), x) - sorted_b.begin();
    const auto above = sorted_b.end() - std::upper_bound(sorted_b.begin(), sorted_b.end(), x);
    dominance += below - above;
  }
  EffectSize e;
  e.delta = static_cast<double>(dominance) /
            (static_cast<double>(a.size()) * static_cast<double>(b.size()));
  e.magnitude = MagnitudeOf(e.delta, cuts);
  return e;
}

absl::StatusOr<std::vector<double>> BenjaminiHochberg(std::span<const double> p_values) {
  for (double p : p_values) {
    if (!(p >= 0.0 && p <= 1.0)) {
      return absl::InvalidArgumentError(absl::StrCat("p-value out of [0, 1]: ", p));
    }
  }
  const size_t m = p_values.size();
  std::vector<size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t i, size_t j) { return p_values[i] < p_values[j]; });
  std::vector<double> adjusted(m);
  double running = 1.0;
  for (size_t r = m; r-- > 0;) {
    const size_t i = order[r];
    running = std::min(running, p_values[i] * static_cast<double>(m) / static_cast<double>(r + 1));
    // p*m/m can round one ulp below p; the adjustment never lowers a p-value.
    adjusted[i] = std::max(running, p_values[i]);
  }
  return adjusted;
}

}  // namespace tflife
