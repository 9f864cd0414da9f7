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

#include "tflifeline/corpus.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"

namespace tflife {
namespace {

constexpr char kLongevityFilter[] = "longevity";
constexpr char kMigrationFilter[] = "corrupted_migration";

double Median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const size_t mid = v.size() / 2;
  return v.size() % 2 ? v[mid] : (v[mid - 1] + v[mid]) / 2.0;
}

int WholeYears(absl::Duration d) {
  return static_cast<int>(std::floor(absl::FDivDuration(d, Years(1))));
}

TfddContext ContextAt(const RepositoryHistory& history, Instant at, const PathRules& rules) {
  TfddContext ctx;
  std::set<std::string> devs;
  for (const CommitRecord& c : history.commits()) {
    if (c.timestamp > at) break;
    ++ctx.commits;
    devs.insert(c.dev_id);
  }
  ctx.developers = static_cast<int>(devs.size());
  if (absl::StatusOr<FileSnapshot> snap = SnapshotFiles(history, at); snap.ok()) {
    ctx.files = static_cast<int>(SelectSourceFiles(*snap, rules).live_files.size());
  }
  ctx.age_days = absl::ToDoubleHours(at - history.created_at()) / 24.0;
  return ctx;
}

void Compare(const std::string& metric, const std::string& family, Sidedness sided,
             const std::vector<double>& surviving, const std::vector<double>& non_surviving,
             const AnalysisConfig& config, std::vector<CohortComparison>& out) {
  if (surviving.empty() || non_surviving.empty()) return;
  CohortComparison c;
  c.metric = metric;
  c.family = family;
  c.n_surviving = static_cast<int>(surviving.size());
  c.n_non_surviving = static_cast<int>(non_surviving.size());
  c.median_surviving = Median(surviving);
  c.median_non_surviving = Median(non_surviving);
  // Inputs are finite and non-empty, so neither call can fail.
  c.test = *MannWhitney(surviving, non_surviving, sided, config.mann_whitney);
  c.effect = *CliffsDelta(surviving, non_surviving, config.cliff);
  c.p_adjusted = c.test.p_value;
  out.push_back(std::move(c));
}

}  // namespace

absl::StatusOr<std::vector<ProjectEntry>> ParseProjectList(absl::string_view text) {
  std::vector<ProjectEntry> out;
  int line_no = 0;
  for (absl::string_view raw : absl::StrSplit(text, '\n')) {
    ++line_no;
    absl::string_view line = raw;
    if (size_t hash = line.find('#'); hash != absl::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = absl::StripAsciiWhitespace(line);
    if (line.empty()) continue;
    std::vector<absl::string_view> parts =
        absl::StrSplit(line, absl::ByAnyChar(" \t"), absl::SkipEmpty());
    if (parts.size() > 2) {
      return absl::InvalidArgumentError(absl::StrCat(
          "project list line ", line_no, ": expected '<path> [owner/name]'"));
    }
    out.push_back({std::string(parts[0]), parts.size() == 2 ? std::string(parts[1]) : ""});
  }
  return out;
}

absl::StatusOr<std::vector<ProjectEntry>> LoadProjectList(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) {
    return absl::NotFoundError(absl::StrCat("cannot read project list ", file.string()));
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return ParseProjectList(buf.str());
}

absl::string_view ProjectStatusName(ProjectStatus status) {
  switch (status) {
    case ProjectStatus::kAnalyzed:
      return "analyzed";
    case ProjectStatus::kExcluded:
      return "excluded";
    case ProjectStatus::kFailed:
      return "failed";
  }
  return "unknown";
}

ProjectOutcome AnalyzeProject(const ProjectEntry& entry, const std::filesystem::path& base_dir,
                              const AnalysisConfig& config, const AliasMapping* mapping,
                              AccountLookup* remote) {
  ProjectOutcome out;
  out.repo_id = entry.source;
  auto fail = [&](const absl::Status& s) {
    out.status = ProjectStatus::kFailed;
    out.failure = std::string(s.message());
    return out;
  };

  std::filesystem::path source(entry.source);
  if (source.is_relative() && !base_dir.empty()) source = base_dir / source;
  absl::StatusOr<RepositoryHistory> raw = IngestRepository(source, entry.source);
  if (!raw.ok()) return fail(raw.status());
  out.total_commits = static_cast<int64_t>(raw->commits().size());
  out.created_at = raw->created_at();
  out.head_at = raw->head_at();

  out.filters_applied.push_back(kMigrationFilter);
  if (IsCorruptedMigration(*raw, config.migration)) {
    out.status = ProjectStatus::kExcluded;
    out.excluded_by = kMigrationFilter;
    return out;
  }
  out.filters_applied.push_back(kLongevityFilter);
  if (IsTooShort(*raw, config.min_history)) {
    out.status = ProjectStatus::kExcluded;
    out.excluded_by = kLongevityFilter;
    return out;
  }

  absl::StatusOr<ResolutionResult> resolved =
      ResolveAliases(*raw, mapping, config.offline ? nullptr : remote, entry.locator);
  if (!resolved.ok()) return fail(resolved.status());
  out.aliases = resolved->report;
  out.warnings = resolved->warnings;
  const RepositoryHistory& history = resolved->history;
  const LifecycleOptions& lc = config.lifecycle;

  if (absl::StatusOr<AuthorshipTable> head =
          BuildAuthorshipTable(history, history.head_at(), lc.rules, lc.doa);
      head.ok()) {
    if (absl::StatusOr<TfSnapshot> tf = ComputeTruckFactor(*head, lc.coverage_threshold);
        tf.ok()) {
      out.tf_at_head = *std::move(tf);
    } else {
      out.warnings.push_back(absl::StrCat("TF at head undefined: ", tf.status().message()));
    }
  } else {
    return fail(head.status());
  }

  absl::StatusOr<LifecycleTimeline> timeline = AnalyzeLifecycle(history, lc);
  if (!timeline.ok()) return fail(timeline.status());
  out.timeline = *std::move(timeline);
  out.tf_profiles = ProfileDevelopers(history, TfDevelopersOf(*out.timeline));
  if (out.has_tfdd()) {
    out.at_tfdd = ContextAt(history, out.timeline->events.back().occurred_at, lc.rules);
  }
  out.status = ProjectStatus::kAnalyzed;
  return out;
}

CorpusAggregates Aggregate(const std::vector<ProjectOutcome>& projects,
                           const AnalysisConfig& config) {
  CorpusAggregates agg;
  agg.projects = static_cast<int>(projects.size());
  std::vector<double> s_after, n_after, s_pct, n_pct;
  std::vector<double> s_devs, n_devs, s_commits, n_commits, s_files, n_files, s_age, n_age;

  for (const ProjectOutcome& p : projects) {
    switch (p.status) {
      case ProjectStatus::kExcluded:
        ++agg.excluded;
        ++agg.exclusions_by_filter[p.excluded_by];
        continue;
      case ProjectStatus::kFailed:
        ++agg.failed;
        continue;
      case ProjectStatus::kAnalyzed:
        ++agg.analyzed;
        break;
    }
    if (p.tf_at_head) ++agg.tf_histogram[p.tf_at_head->tf];
    if (!p.has_tfdd()) continue;

    const LifecycleTimeline& tl = *p.timeline;
    ++agg.projects_with_tfdd;
    ++agg.events_per_project[static_cast<int>(tl.events.size())];
    for (const TfddEvent& e : tl.events) ++agg.tfdd_by_tf[e.tf_at_event];
    ++agg.repo_age_years[WholeYears(*p.head_at - *p.created_at)];
    ++agg.tfdd_timing_years[WholeYears(tl.events.front().occurred_at - *p.created_at)];

    const bool survived = tl.survival.survived;
    if (survived) {
      ++agg.survived;
      ++agg.new_tf_developer_count[static_cast<int>(tl.survival.new_tf_developers.size())];
      if (tl.survival.attraction_delay_years) {
        ++agg.attraction_delay_years[*tl.survival.attraction_delay_years];
      }
      int newcomers = 0;
      for (const auto& [dev, kind] : tl.survival.newcomer_split) {
        if (kind == ContributorKind::kNewcomer) ++newcomers;
      }
      const int total = static_cast<int>(tl.survival.newcomer_split.size());
      if (newcomers == total) {
        ++agg.survived_newcomers_only;
      } else if (newcomers == 0) {
        ++agg.survived_old_contributors_only;
      } else {
        ++agg.survived_mixed;
      }
    }
    const PostTfddMetrics& m = *tl.post_tfdd;
    agg.commits_after.push_back({p.repo_id, survived, m.commits_after, m.pct_commits_after,
                                 m.new_tf_file_share});
    (survived ? s_after : n_after).push_back(static_cast<double>(m.commits_after));
    (survived ? s_pct : n_pct).push_back(m.pct_commits_after);
    const TfddContext& ctx = *p.at_tfdd;
    (survived ? s_devs : n_devs).push_back(ctx.developers);
    (survived ? s_commits : n_commits).push_back(static_cast<double>(ctx.commits));
    (survived ? s_files : n_files).push_back(ctx.files);
    (survived ? s_age : n_age).push_back(ctx.age_days);
  }

  if (agg.analyzed > 0) {
    agg.tfdd_rate = static_cast<double>(agg.projects_with_tfdd) / agg.analyzed;
  }
  if (agg.projects_with_tfdd > 0) {
    agg.survival_rate = static_cast<double>(agg.survived) / agg.projects_with_tfdd;
  }

  Compare("commits_after", "after_tfdd", Sidedness::kOneSidedGreater, s_after, n_after,
          config, agg.cohorts);
  Compare("pct_commits_after", "after_tfdd", Sidedness::kOneSidedGreater, s_pct, n_pct,
          config, agg.cohorts);
  Compare("developers", "at_tfdd", Sidedness::kTwoSided, s_devs, n_devs, config, agg.cohorts);
  Compare("commits", "at_tfdd", Sidedness::kTwoSided, s_commits, n_commits, config,
          agg.cohorts);
  Compare("files", "at_tfdd", Sidedness::kTwoSided, s_files, n_files, config, agg.cohorts);
  Compare("age_days", "at_tfdd", Sidedness::kTwoSided, s_age, n_age, config, agg.cohorts);

  std::map<std::string, std::vector<size_t>> families;
  for (size_t i = 0; i < agg.cohorts.size(); ++i) families[agg.cohorts[i].family].push_back(i);
  for (const auto& [family, idx] : families) {
    std::vector<double> raw;
    for (size_t i : idx) raw.push_back(agg.cohorts[i].test.p_value);
    absl::StatusOr<std::vector<double>> adj = BenjaminiHochberg(raw);
    if (!adj.ok()) continue;
    for (size_t k = 0; k < idx.size(); ++k) agg.cohorts[idx[k]].p_adjusted = (*adj)[k];
  }
  return agg;
}

CorpusReport RunEntries(const std::vector<ProjectEntry>& entries,
                        const std::filesystem::path& base_dir, const RunOptions& options) {
  const AnalysisConfig& config = options.config;
  std::optional<AliasMapping> mapping;
  std::vector<ProjectOutcome> outcomes(entries.size());
  std::string mapping_error;
  if (!config.mapping_file.empty()) {
    absl::StatusOr<AliasMapping> m = AliasMapping::Load(config.mapping_file);
    if (m.ok()) {
      mapping = *std::move(m);
    } else {
      mapping_error = std::string(m.status().message());
    }
  }

  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < entries.size(); i = next++) {
      if (!mapping_error.empty()) {
        outcomes[i].repo_id = entries[i].source;
        outcomes[i].failure = mapping_error;
        continue;
      }
      try {
        outcomes[i] = AnalyzeProject(entries[i], base_dir, config,
                                     mapping ? &*mapping : nullptr, options.remote);
      } catch (const std::exception& e) {
        outcomes[i] = ProjectOutcome{};
        outcomes[i].repo_id = entries[i].source;
        outcomes[i].failure = absl::StrCat("unexpected error: ", e.what());
      }
    }
  };
  int jobs = options.jobs > 0 ? options.jobs
                              : static_cast<int>(std::thread::hardware_concurrency());
  jobs = std::clamp(jobs, 1, std::max(1, static_cast<int>(entries.size())));
  std::vector<std::thread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  std::stable_sort(outcomes.begin(), outcomes.end(),
                   [](const ProjectOutcome& a, const ProjectOutcome& b) {
                     return a.repo_id < b.repo_id;
                   });
  CorpusReport report;
  report.aggregates = Aggregate(outcomes, config);
  report.projects = std::move(outcomes);
  return report;
}

absl::StatusOr<CorpusReport> RunCorpus(const std::filesystem::path& list_file,
                                       const RunOptions& options) {
  absl::StatusOr<std::vector<ProjectEntry>> entries = LoadProjectList(list_file);
  if (!entries.ok()) return entries.status();
  if (!options.config.mapping_file.empty()) {
    absl::StatusOr<AliasMapping> m = AliasMapping::Load(options.config.mapping_file);
    if (!m.ok()) return m.status();
  }
  return RunEntries(*entries, list_file.parent_path(), options);
}

}  // namespace tflife
