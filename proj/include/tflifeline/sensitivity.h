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

#ifndef TFLIFELINE_SENSITIVITY_H_
#define TFLIFELINE_SENSITIVITY_H_

#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/time/time.h"
#include "tflifeline/history.h"
#include "tflifeline/lifecycle.h"

namespace tflife {

// Gaps between one developer's consecutive commits in one repository,
// sorted ascending.
struct InterCommitProfile {
  std::string repo_id;
  std::string dev_id;
  std::vector<absl::Duration> deltas;
};

// Profiles for `devs` in `history`; developers with fewer than two commits
// have no gaps and are skipped.
std::vector<InterCommitProfile> ProfileDevelopers(const RepositoryHistory& history,
                                                  const std::set<std::string>& devs);

// Every developer that appears in any TF set of the timeline.
std::set<std::string> TfDevelopersOf(const LifecycleTimeline& timeline);

// A profile is an error for `threshold` when one of its gaps is >= threshold:
// the threshold would have called an active developer an abandoner.
bool HasError(const InterCommitProfile& profile, absl::Duration threshold);

// Share of profiles without an error.
absl::StatusOr<double> PrecisionOf(absl::Duration threshold,
                                   std::span<const InterCommitProfile> profiles);

// Share of the smaller threshold's errors that the larger one fixes; nullopt
// when the smaller threshold makes no error.
absl::StatusOr<std::optional<double>> ImprovementOf(
    absl::Duration larger, absl::Duration smaller,
    std::span<const InterCommitProfile> profiles);

// 2 * p * impr / (p + impr).
absl::StatusOr<double> HarmonicMean(double precision, double improvement);

struct SensitivityRow {
  absl::Duration threshold;
  double precision = 0.0;
  std::optional<double> improvement;    // vs. the previous row
  std::optional<double> harmonic_mean;  // when improvement is defined
};

struct SensitivityReport {
  int profiles = 0;
  std::vector<SensitivityRow> rows;
};

// 3 months, 6 months, 1 year, 1.5 years, 2 years.
std::vector<absl::Duration> DefaultThresholdGrid();

// `grid` must be strictly ascending.
absl::StatusOr<SensitivityReport> AnalyzeSensitivity(
    const std::vector<absl::Duration>& grid,
    std::span<const InterCommitProfile> profiles);

}  // namespace tflife

#endif  // TFLIFELINE_SENSITIVITY_H_
