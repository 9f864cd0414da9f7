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

#ifndef TFLIFELINE_CORPUS_H_
#define TFLIFELINE_CORPUS_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include "absl/strings/string_view.h"
#include <vector>

#include "absl/status/statusor.h"
#include "tflifeline/config.h"
#include "tflifeline/identity.h"
#include "tflifeline/lifecycle.h"
#include "tflifeline/sensitivity.h"
#include "tflifeline/stats.h"
#include "tflifeline/truck_factor.h"

namespace tflife {

inline constexpr int kReportSchemaVersion = 1;

// One line of a project list: `<path> [owner/name]`. The optional locator
// enables remote alias lookups for that project.
struct ProjectEntry {
  std::string source;
  std::string locator;
};

// `#` starts a comment; blank lines are skipped. Sources stay as written;
// AnalyzeProject resolves relative ones against the list's directory.
absl::StatusOr<std::vector<ProjectEntry>> ParseProjectList(absl::string_view text);
absl::StatusOr<std::vector<ProjectEntry>> LoadProjectList(const std::filesystem::path& file);

enum class ProjectStatus { kAnalyzed, kExcluded, kFailed };

absl::string_view ProjectStatusName(ProjectStatus status);

// Project characteristics at the last TFDD's occurrence.
struct TfddContext {
  int developers = 0;
  int64_t commits = 0;
  int files = 0;
  double age_days = 0.0;
};

struct ProjectOutcome {
  std::string repo_id;  // the list entry as written
  ProjectStatus status = ProjectStatus::kFailed;
  std::vector<std::string> filters_applied;  // filters evaluated, in order
  std::string excluded_by;                   // set when status == kExcluded
  std::string failure;                       // set when status == kFailed
  std::vector<std::string> warnings;

  int64_t total_commits = 0;
  std::optional<Instant> created_at;
  std::optional<Instant> head_at;
  std::optional<AliasReport> aliases;
  std::optional<TfSnapshot> tf_at_head;
  std::optional<LifecycleTimeline> timeline;
  std::optional<TfddContext> at_tfdd;
  // Inter-commit gaps of every developer that was ever in a TF set.
  std::vector<InterCommitProfile> tf_profiles;

  bool has_tfdd() const { return timeline && !timeline->events.empty(); }
  bool survived() const { return has_tfdd() && timeline->survival.survived; }
};

struct CohortComparison {
  std::string metric;
  std::string family;  // p-values are adjusted within a family
  int n_surviving = 0;
  int n_non_surviving = 0;
  double median_surviving = 0.0;
  double median_non_surviving = 0.0;
  TestResult test;
  EffectSize effect;
  double p_adjusted = 1.0;
};

struct CommitsAfterRow {
  std::string repo_id;
  bool survived = false;
  int64_t commits_after = 0;
  double pct_commits_after = 0.0;
  double new_tf_file_share = 0.0;
};

struct CorpusAggregates {
  int projects = 0;
  int analyzed = 0;
  int excluded = 0;
  int failed = 0;
  std::map<std::string, int> exclusions_by_filter;

  std::map<int, int> tf_histogram;  // TF at head -> projects
  int projects_with_tfdd = 0;
  double tfdd_rate = 0.0;              // over analyzed projects
  std::map<int, int> events_per_project;
  std::map<int, int> tfdd_by_tf;       // TF at event -> events
  std::map<int, int> repo_age_years;   // projects with a TFDD
  std::map<int, int> tfdd_timing_years;  // first TFDD, years after creation

  int survived = 0;
  std::optional<double> survival_rate;  // over projects with a TFDD
  std::map<int, int> new_tf_developer_count;
  std::map<int, int> attraction_delay_years;
  int survived_newcomers_only = 0;
  int survived_old_contributors_only = 0;
  int survived_mixed = 0;

  std::vector<CommitsAfterRow> commits_after;
  std::vector<CohortComparison> cohorts;
};

struct CorpusReport {
  int schema_version = kReportSchemaVersion;
  std::vector<ProjectOutcome> projects;  // sorted by repo_id
  CorpusAggregates aggregates;
};

// Runs ingest -> filters -> alias resolution -> snapshots -> TFDD -> survival
// -> metrics for one project. Never fails: problems end up in the outcome.
ProjectOutcome AnalyzeProject(const ProjectEntry& entry, const std::filesystem::path& base_dir,
                              const AnalysisConfig& config, const AliasMapping* mapping,
                              AccountLookup* remote);

CorpusAggregates Aggregate(const std::vector<ProjectOutcome>& projects,
                           const AnalysisConfig& config);

struct RunOptions {
  AnalysisConfig config;
  int jobs = 0;  // <= 0: hardware concurrency
  // Remote alias lookups; nullptr keeps the run offline.
  AccountLookup* remote = nullptr;
};

CorpusReport RunEntries(const std::vector<ProjectEntry>& entries,
                        const std::filesystem::path& base_dir, const RunOptions& options);

// Fails only when the list or the mapping file cannot be read.
absl::StatusOr<CorpusReport> RunCorpus(const std::filesystem::path& list_file,
                                       const RunOptions& options);

}  // namespace tflife

#endif  // TFLIFELINE_CORPUS_H_
