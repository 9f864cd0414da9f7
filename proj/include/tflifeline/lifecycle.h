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

#ifndef TFLIFELINE_LIFECYCLE_H_
#define TFLIFELINE_LIFECYCLE_H_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include "absl/strings/string_view.h"
#include <vector>

#include "absl/status/statusor.h"
#include "absl/time/time.h"
#include "tflifeline/authorship.h"
#include "tflifeline/history.h"
#include "tflifeline/path_rules.h"
#include "tflifeline/truck_factor.h"

namespace tflife {

// Which instant a developer's inactivity is measured against.
enum class AbandonmentAnchor {
  kHead,      // the repository's most recent commit (default)
  kSnapshot,  // the snapshot being evaluated
};

struct AbandonmentPolicy {
  absl::Duration threshold = Years(1);
  AbandonmentAnchor anchor = AbandonmentAnchor::kHead;
};

struct DeveloperActivity {
  Instant first_commit;
  Instant last_commit;
  int64_t commits = 0;
};

// Per-developer first/last commit over the whole history.
std::map<std::string, DeveloperActivity> IndexActivity(const RepositoryHistory& history);

// anchor - last_commit(dev) >= threshold, where anchor is head_at, or
// `snapshot` under AbandonmentAnchor::kSnapshot.
absl::StatusOr<bool> IsAbandoner(absl::string_view dev, const RepositoryHistory& history,
                                 const AbandonmentPolicy& policy,
                                 std::optional<Instant> snapshot = std::nullopt);

struct LifecycleOptions {
  PathRules rules;
  DoaModel doa;
  double coverage_threshold = 0.5;
  int cadence_months = 12;
  AbandonmentPolicy policy;
};

// One scheduled TF computation. `snapshot` is empty when the TF is undefined
// at that instant (no authored file); `gap_reason` says why.
struct TimelinePoint {
  Instant as_of;
  std::optional<TfSnapshot> snapshot;
  std::string gap_reason;
};

// Snapshots at created_at + k * cadence for k = 1, 2, ... while <= head_at,
// each over the cumulative history up to that instant.
std::vector<TimelinePoint> PeriodicSnapshots(const RepositoryHistory& history,
                                             const LifecycleOptions& options);

struct TfddEvent {
  Instant detected_at;
  Instant occurred_at;  // latest last commit among the detached developers
  std::set<std::string> detached;
  int tf_at_event = 0;
};

enum class ProjectState { kActive, kInactive };

// Walks the snapshots with the Active/Inactive machine:
//  - Active -> Inactive at a snapshot whose TF developers all have their
//    last commit before the snapshot and are abandoners; this records an
//    event, unless its occurred_at does not move past the previous event's.
//  - Inactive -> Active at a snapshot whose TF set holds a developer outside
//    the last event's detached set who is not an abandoner.
//  - Repeated TFDD snapshots while Inactive belong to the same event.
// Gap snapshots keep the current state.
struct StateWalk {
  std::vector<ProjectState> states;  // one per timeline point
  std::vector<TfddEvent> events;
};

StateWalk WalkStates(const std::vector<TimelinePoint>& points,
                     const RepositoryHistory& history, const AbandonmentPolicy& policy);

std::vector<TfddEvent> DetectTfdd(const std::vector<TimelinePoint>& points,
                                  const RepositoryHistory& history,
                                  const AbandonmentPolicy& policy);

enum class ContributorKind { kNewcomer, kOldContributor };

absl::string_view ContributorKindName(ContributorKind kind);

struct SurvivalVerdict {
  bool survived = false;
  std::set<std::string> new_tf_developers;
  // Newcomer iff first commit is after the last event's occurred_at.
  std::map<std::string, ContributorKind> newcomer_split;
  std::optional<Instant> revived_at;
  // Whole years from occurred_at to revived_at (0 = within the first year).
  std::optional<int> attraction_delay_years;
};

// Survival w.r.t. the last event. Fails when `events` is empty.
absl::StatusOr<SurvivalVerdict> ClassifySurvival(const std::vector<TimelinePoint>& points,
                                                 const std::vector<TfddEvent>& events,
                                                 const RepositoryHistory& history,
                                                 const AbandonmentPolicy& policy);

struct PostTfddMetrics {
  int64_t commits_after = 0;
  double pct_commits_after = 0.0;
  // Files at head with a new TF developer among their main authors, over all
  // files in the head table.
  double new_tf_file_share = 0.0;
};

PostTfddMetrics ComputePostTfddMetrics(const RepositoryHistory& history,
                                       const TfddEvent& last_event,
                                       const std::set<std::string>& new_tf_developers,
                                       const AuthorshipTable& head_table);

struct LifecycleTimeline {
  std::string repo_id;
  std::vector<TimelinePoint> points;
  std::vector<ProjectState> states;
  std::vector<TfddEvent> events;
  // Only meaningful when events is non-empty.
  SurvivalVerdict survival;
  std::optional<PostTfddMetrics> post_tfdd;
};

// Full per-repository pipeline from snapshots to post-TFDD metrics.
absl::StatusOr<LifecycleTimeline> AnalyzeLifecycle(const RepositoryHistory& history,
                                                   const LifecycleOptions& options);

}  // namespace tflife

#endif  // TFLIFELINE_LIFECYCLE_H_
