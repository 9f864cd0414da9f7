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

#include "tflifeline/lifecycle.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "absl/strings/str_cat.h"

namespace tflife {
namespace {

Instant AnchorFor(const RepositoryHistory& history, const AbandonmentPolicy& policy,
                  std::optional<Instant> snapshot) {
  if (policy.anchor == AbandonmentAnchor::kSnapshot && snapshot) return *snapshot;
  return history.head_at();
}

bool Abandoned(const DeveloperActivity& a, Instant anchor, absl::Duration threshold) {
  return anchor - a.last_commit >= threshold;
}

// Shared context for the state machine and survival checks.
class Judge {
 public:
  Judge(const RepositoryHistory& history, const AbandonmentPolicy& policy)
      : history_(history), policy_(policy), activity_(IndexActivity(history)) {}

  const DeveloperActivity* Find(const std::string& dev) const {
    auto it = activity_.find(dev);
    return it == activity_.end() ? nullptr : &it->second;
  }

  bool IsAbandonerAt(const std::string& dev, Instant t) const {
    const DeveloperActivity* a = Find(dev);
    return a != nullptr && Abandoned(*a, AnchorFor(history_, policy_, t), policy_.threshold);
  }

  // Every TF developer left before t and counts as an abandoner.
  std::optional<TfddEvent> Detachment(const TfSnapshot& snap) const {
    Instant occurred = absl::InfinitePast();
    for (const std::string& dev : snap.tf_developers) {
      const DeveloperActivity* a = Find(dev);
      if (a == nullptr || a->last_commit >= snap.as_of || !IsAbandonerAt(dev, snap.as_of)) {
        return std::nullopt;
      }
      occurred = std::max(occurred, a->last_commit);
    }
    if (snap.tf_developers.empty()) return std::nullopt;
    return TfddEvent{snap.as_of, occurred, snap.tf_developers, snap.tf};
  }

  // TF developers outside `detached` that are still active.
  std::set<std::string> Newcomers(const TfSnapshot& snap,
                                  const std::set<std::string>& detached) const {
    std::set<std::string> out;
    for (const std::string& dev : snap.tf_developers) {
      if (!detached.contains(dev) && !IsAbandonerAt(dev, snap.as_of)) out.insert(dev);
    }
    return out;
  }

 private:
  const RepositoryHistory& history_;
  const AbandonmentPolicy& policy_;
  std::map<std::string, DeveloperActivity> activity_;
};

}  // namespace

std::map<std::string, DeveloperActivity> IndexActivity(const RepositoryHistory& history) {
  std::map<std::string, DeveloperActivity> out;
  for (const CommitRecord& c : history.commits()) {
    auto [it, inserted] = out.try_emplace(c.dev_id, DeveloperActivity{c.timestamp, c.timestamp, 0});
    it->second.last_commit = c.timestamp;
    ++it->second.commits;
  }
  return out;
}

absl::StatusOr<bool> IsAbandoner(absl::string_view dev, const RepositoryHistory& history,
                                 const AbandonmentPolicy& policy,
                                 std::optional<Instant> snapshot) {
  const auto activity = IndexActivity(history);
  auto it = activity.find(std::string(dev));
  if (it == activity.end()) {
    return absl::NotFoundError(absl::StrCat("unknown developer '", dev, "'"));
  }
  return Abandoned(it->second, AnchorFor(history, policy, snapshot), policy.threshold);
}

std::vector<TimelinePoint> PeriodicSnapshots(const RepositoryHistory& history,
                                             const LifecycleOptions& options) {
  std::vector<TimelinePoint> points;
  const int cadence = std::max(options.cadence_months, 1);
  for (int k = 1;; ++k) {
    const Instant t = AddCalendarMonths(history.created_at(), k * cadence);
    if (t > history.head_at()) break;
    TimelinePoint p{t, std::nullopt, ""};
    absl::StatusOr<AuthorshipTable> table =
        BuildAuthorshipTable(history, t, options.rules, options.doa);
    if (!table.ok()) {
      p.gap_reason = std::string(table.status().message());
    } else if (absl::StatusOr<TfSnapshot> tf =
                   ComputeTruckFactor(*table, options.coverage_threshold);
               tf.ok()) {
      p.snapshot = *std::move(tf);
    } else {
      p.gap_reason = std::string(tf.status().message());
    }
    points.push_back(std::move(p));
  }
  return points;
}

StateWalk WalkStates(const std::vector<TimelinePoint>& points,
                     const RepositoryHistory& history, const AbandonmentPolicy& policy) {
  const Judge judge(history, policy);
  StateWalk walk;
  ProjectState state = ProjectState::kActive;
  for (const TimelinePoint& p : points) {
    if (p.snapshot) {
      if (state == ProjectState::kActive) {
        std::optional<TfddEvent> ev = judge.Detachment(*p.snapshot);
        if (ev && (walk.events.empty() || ev->occurred_at > walk.events.back().occurred_at)) {
          walk.events.push_back(*std::move(ev));
          state = ProjectState::kInactive;
        }
      } else if (!judge.Newcomers(*p.snapshot, walk.events.back().detached).empty()) {
        state = ProjectState::kActive;
      }
    }
    walk.states.push_back(state);
  }
  return walk;
}

std::vector<TfddEvent> DetectTfdd(const std::vector<TimelinePoint>& points,
                                  const RepositoryHistory& history,
                                  const AbandonmentPolicy& policy) {
  return WalkStates(points, history, policy).events;
}

absl::string_view ContributorKindName(ContributorKind kind) {
  return kind == ContributorKind::kNewcomer ? "newcomer" : "old_contributor";
}

absl::StatusOr<SurvivalVerdict> ClassifySurvival(const std::vector<TimelinePoint>& points,
                                                 const std::vector<TfddEvent>& events,
                                                 const RepositoryHistory& history,
                                                 const AbandonmentPolicy& policy) {
  if (events.empty()) {
    return absl::FailedPreconditionError("survival is undefined without a TFDD");
  }
  const TfddEvent& last = events.back();
  const Judge judge(history, policy);
  SurvivalVerdict verdict;
  for (const TimelinePoint& p : points) {
    if (!p.snapshot || p.as_of <= last.detected_at) continue;
    std::set<std::string> fresh = judge.Newcomers(*p.snapshot, last.detached);
    if (fresh.empty()) continue;
    verdict.survived = true;
    verdict.revived_at = p.as_of;
    verdict.attraction_delay_years = static_cast<int>(
        std::floor(absl::FDivDuration(p.as_of - last.occurred_at, Years(1))));
    for (const std::string& dev : fresh) {
      verdict.newcomer_split[dev] = judge.Find(dev)->first_commit > last.occurred_at
                                        ? ContributorKind::kNewcomer
                                        : ContributorKind::kOldContributor;
    }
    verdict.new_tf_developers = std::move(fresh);
    break;
  }
  return verdict;
}

PostTfddMetrics ComputePostTfddMetrics(const RepositoryHistory& history,
                                       const TfddEvent& last_event,
                                       const std::set<std::string>& new_tf_developers,
                                       const AuthorshipTable& head_table) {
  PostTfddMetrics m;
  for (const CommitRecord& c : history.commits()) {
    if (c.timestamp > last_event.occurred_at) ++m.commits_after;
  }
  m.pct_commits_after =
      static_cast<double>(m.commits_after) / static_cast<double>(history.commits().size());
  if (!new_tf_developers.empty() && !head_table.files.empty()) {
    int owned = 0;
    for (const auto& [path, file] : head_table.files) {
      if (std::any_of(file.main_authors.begin(), file.main_authors.end(),
                      [&](const std::string& d) { return new_tf_developers.contains(d); })) {
        ++owned;
      }
    }
    m.new_tf_file_share =
        static_cast<double>(owned) / static_cast<double>(head_table.files.size());
  }
  return m;
}

absl::StatusOr<LifecycleTimeline> AnalyzeLifecycle(const RepositoryHistory& history,
                                                   const LifecycleOptions& options) {
  LifecycleTimeline tl;
  tl.repo_id = history.repo_id();
  tl.points = PeriodicSnapshots(history, options);
  StateWalk walk = WalkStates(tl.points, history, options.policy);
  tl.states = std::move(walk.states);
  tl.events = std::move(walk.events);
  if (tl.events.empty()) return tl;

  absl::StatusOr<SurvivalVerdict> verdict =
      ClassifySurvival(tl.points, tl.events, history, options.policy);
  if (!verdict.ok()) return verdict.status();
  tl.survival = *std::move(verdict);

  absl::StatusOr<AuthorshipTable> head =
      BuildAuthorshipTable(history, history.head_at(), options.rules, options.doa);
  if (!head.ok()) return head.status();
  tl.post_tfdd = ComputePostTfddMetrics(history, tl.events.back(),
                                        tl.survival.new_tf_developers, *head);
  return tl;
}

}  // namespace tflife
