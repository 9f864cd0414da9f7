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

#include "tflifeline/sensitivity.h"

#include <algorithm>
#include <map>

#include "absl/strings/str_cat.h"

namespace tflife {

std::vector<InterCommitProfile> ProfileDevelopers(const RepositoryHistory& history,
                                                  const std::set<std::string>& devs) {
  std::map<std::string, std::vector<Instant>> times;
  for (const CommitRecord& c : history.commits()) {
    if (devs.contains(c.dev_id)) times[c.dev_id].push_back(c.timestamp);
  }
  std::vector<InterCommitProfile> out;
  for (const auto& [dev, ts] : times) {
    if (ts.size() < 2) continue;
    InterCommitProfile p{history.repo_id(), dev, {}};
    for (size_t i = 1; i < ts.size(); ++i) p.deltas.push_back(ts[i] - ts[i - 1]);
    std::sort(p.deltas.begin(), p.deltas.end());
    out.push_back(std::move(p));
  }
  return out;
}

std::set<std::string> TfDevelopersOf(const LifecycleTimeline& timeline) {
  std::set<std::string> out;
  for (const TimelinePoint& p : timeline.points) {
    if (p.snapshot) out.insert(p.snapshot->tf_developers.begin(), p.snapshot->tf_developers.end());
  }
  return out;
}

bool HasError(const InterCommitProfile& profile, absl::Duration threshold) {
  return std::any_of(profile.deltas.begin(), profile.deltas.end(),
                     [&](absl::Duration d) { return d >= threshold; });
}

absl::StatusOr<double> PrecisionOf(absl::Duration threshold,
                                   std::span<const InterCommitProfile> profiles) {
  if (profiles.empty()) return absl::InvalidArgumentError("no developer profiles");
  const auto clean = std::count_if(profiles.begin(), profiles.end(),
                                   [&](const auto& p) { return !HasError(p, threshold); });
  return static_cast<double>(clean) / static_cast<double>(profiles.size());
}

absl::StatusOr<std::optional<double>> ImprovementOf(
    absl::Duration larger, absl::Duration smaller,
    std::span<const InterCommitProfile> profiles) {
  if (!(smaller < larger)) {
    return absl::InvalidArgumentError("improvement needs smaller < larger");
  }
  int flagged = 0;
  int fixed = 0;
  for (const InterCommitProfile& p : profiles) {
    if (!HasError(p, smaller)) continue;
    ++flagged;
    if (!HasError(p, larger)) ++fixed;
  }
  if (flagged == 0) return std::optional<double>();
  return std::optional<double>(static_cast<double>(fixed) / flagged);
}

absl::StatusOr<double> HarmonicMean(double precision, double improvement) {
  if (precision < 0 || precision > 1 || improvement < 0 || improvement > 1) {
    return absl::InvalidArgumentError("harmonic mean inputs must lie in [0, 1]");
  }
  if (precision == 0 && improvement == 0) {
    return absl::InvalidArgumentError("harmonic mean undefined for (0, 0)");
  }
  return 2 * precision * improvement / (precision + improvement);
}

std::vector<absl::Duration> DefaultThresholdGrid() {
  return {Months(3), Months(6), Years(1), Years(1.5), Years(2)};
}

absl::StatusOr<SensitivityReport> AnalyzeSensitivity(
    const std::vector<absl::Duration>& grid,
    std::span<const InterCommitProfile> profiles) {
  if (grid.empty()) return absl::InvalidArgumentError("empty threshold grid");
  for (size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i - 1] < grid[i])) {
      return absl::InvalidArgumentError("threshold grid must be strictly ascending");
    }
  }
  SensitivityReport report;
  report.profiles = static_cast<int>(profiles.size());
  for (size_t i = 0; i < grid.size(); ++i) {
    SensitivityRow row{grid[i], 0.0, std::nullopt, std::nullopt};
    absl::StatusOr<double> p = PrecisionOf(grid[i], profiles);
    if (!p.ok()) return p.status();
    row.precision = *p;
    if (i > 0) {
      absl::StatusOr<std::optional<double>> impr = ImprovementOf(grid[i], grid[i - 1], profiles);
      if (!impr.ok()) return impr.status();
      row.improvement = *impr;
      if (row.improvement && (row.precision > 0 || *row.improvement > 0)) {
        absl::StatusOr<double> h = HarmonicMean(row.precision, *row.improvement);
        if (!h.ok()) return h.status();
        row.harmonic_mean = *h;
      }
    }
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace tflife
