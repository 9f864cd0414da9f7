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

#ifndef TFLIFELINE_STATS_H_
#define TFLIFELINE_STATS_H_

#include <span>
#include "absl/strings/string_view.h"
#include <vector>

#include "absl/status/statusor.h"

namespace tflife {

// Alternative hypothesis of a rank test, stated for the first sample.
enum class Sidedness {
  kOneSidedGreater,  // a tends to be larger than b
  kOneSidedLess,     // a tends to be smaller than b
  kTwoSided,
};

absl::string_view SidednessName(Sidedness s);

struct TestResult {
  double statistic = 0.0;  // U of the first sample (midranks)
  double p_value = 1.0;
  Sidedness sided = Sidedness::kTwoSided;
  bool exact = false;
};

struct MannWhitneyOptions {
  // Exact distribution when the smaller sample has at most this many values;
  // normal approximation with tie and continuity correction above it.
  int exact_max_group = 8;
};

// Mann-Whitney U with midranks for ties. The exact p-value counts the rank
// arrangements of the pooled midranks whose rank sum is at least as extreme;
// the two-sided value is twice the smaller tail, capped at 1.
absl::StatusOr<TestResult> MannWhitney(std::span<const double> a, std::span<const double> b,
                                       Sidedness sided, const MannWhitneyOptions& options = {});

enum class Magnitude { kNegligible, kSmall, kMedium, kLarge };

absl::string_view MagnitudeName(Magnitude m);

struct CliffCutPoints {
  double negligible = 0.147;  // |d| below: negligible
  double small = 0.33;        // below: small
  double medium = 0.474;      // below: medium, else large
};

Magnitude MagnitudeOf(double delta, const CliffCutPoints& cuts = {});

struct EffectSize {
  double delta = 0.0;
  Magnitude magnitude = Magnitude::kNegligible;
};

// (#{x > y} - #{x < y}) / (|a| |b|) over all pairs.
absl::StatusOr<EffectSize> CliffsDelta(std::span<const double> a, std::span<const double> b,
                                       const CliffCutPoints& cuts = {});

// Step-up adjustment; results are in input order and capped at 1.
absl::StatusOr<std::vector<double>> BenjaminiHochberg(std::span<const double> p_values);

}  // namespace tflife

#endif  // TFLIFELINE_STATS_H_
