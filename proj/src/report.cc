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

#include "tflifeline/report.h"

#include <cstdlib>
#include <fstream>
#include <system_error>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "json.hpp"

namespace tflife {
namespace {

using nlohmann::json;

std::string Num(double v) { return absl::StrFormat("%.6g", v); }

std::string CsvField(absl::string_view s) {
  if (s.find_first_of(",\"\n") == absl::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

json Strings(const auto& container) {
  json a = json::array();
  for (const auto& s : container) a.push_back(s);
  return a;
}

json Histogram(const std::map<int, int>& h, const char* key) {
  json a = json::array();
  for (const auto& [k, v] : h) a.push_back({{key, k}, {"count", v}});
  return a;
}

json SnapshotJson(const TfSnapshot& s) {
  return {{"as_of", FormatInstant(s.as_of)},
          {"tf", s.tf},
          {"tf_developers", Strings(s.tf_developers)},
          {"coverage_at_stop", Sig6(s.coverage_at_stop)},
          {"removal_order", Strings(s.removal_order)}};
}

json TimelineJson(const LifecycleTimeline& tl) {
  json points = json::array();
  for (size_t i = 0; i < tl.points.size(); ++i) {
    const TimelinePoint& p = tl.points[i];
    json jp = {{"as_of", FormatInstant(p.as_of)},
               {"state", tl.states[i] == ProjectState::kActive ? "active" : "inactive"}};
    if (p.snapshot) {
      jp["tf"] = p.snapshot->tf;
      jp["tf_developers"] = Strings(p.snapshot->tf_developers);
      jp["coverage_at_stop"] = Sig6(p.snapshot->coverage_at_stop);
    } else {
      jp["gap"] = p.gap_reason;
    }
    points.push_back(std::move(jp));
  }
  json events = json::array();
  for (const TfddEvent& e : tl.events) {
    events.push_back({{"detected_at", FormatInstant(e.detected_at)},
                      {"occurred_at", FormatInstant(e.occurred_at)},
                      {"detached", Strings(e.detached)},
                      {"tf_at_event", e.tf_at_event}});
  }
  json j = {{"snapshots", std::move(points)}, {"events", std::move(events)}};
  if (!tl.events.empty()) {
    const SurvivalVerdict& sv = tl.survival;
    json split = json::object();
    for (const auto& [dev, kind] : sv.newcomer_split) split[dev] = ContributorKindName(kind);
    j["survived"] = sv.survived;
    j["new_tf_developers"] = Strings(sv.new_tf_developers);
    j["newcomer_split"] = std::move(split);
    j["revived_at"] = sv.revived_at ? json(FormatInstant(*sv.revived_at)) : json();
    j["attraction_delay_years"] =
        sv.attraction_delay_years ? json(*sv.attraction_delay_years) : json();
    if (tl.post_tfdd) {
      j["post_tfdd_metrics"] = {{"commits_after", tl.post_tfdd->commits_after},
                                {"pct_commits_after", Sig6(tl.post_tfdd->pct_commits_after)},
                                {"new_tf_file_share", Sig6(tl.post_tfdd->new_tf_file_share)}};
    }
  }
  return j;
}

json ProjectJson(const ProjectOutcome& p) {
  json j = {{"repo_id", p.repo_id},
            {"status", ProjectStatusName(p.status)},
            {"filters_applied", Strings(p.filters_applied)},
            {"warnings", Strings(p.warnings)}};
  if (!p.excluded_by.empty()) j["excluded_by"] = p.excluded_by;
  if (!p.failure.empty()) j["failure"] = p.failure;
  if (p.created_at) {
    j["commits"] = p.total_commits;
    j["created_at"] = FormatInstant(*p.created_at);
    j["head_at"] = FormatInstant(*p.head_at);
  }
  if (p.aliases) {
    j["alias_percentage"] = Sig6(p.aliases->alias_percentage);
    j["raw_identities"] = p.aliases->raw_identities;
    j["canonical_developers"] = p.aliases->canonical_developers;
  }
  if (p.tf_at_head) j["tf_at_head"] = SnapshotJson(*p.tf_at_head);
  if (p.timeline) j["lifecycle"] = TimelineJson(*p.timeline);
  if (p.at_tfdd) {
    j["at_last_tfdd"] = {{"developers", p.at_tfdd->developers},
                         {"commits", p.at_tfdd->commits},
                         {"files", p.at_tfdd->files},
                         {"age_days", Sig6(p.at_tfdd->age_days)}};
  }
  return j;
}

json AggregatesJson(const CorpusAggregates& a) {
  json cohorts = json::array();
  for (const CohortComparison& c : a.cohorts) {
    cohorts.push_back({{"metric", c.metric},
                       {"family", c.family},
                       {"n_surviving", c.n_surviving},
                       {"n_non_surviving", c.n_non_surviving},
                       {"median_surviving", Sig6(c.median_surviving)},
                       {"median_non_surviving", Sig6(c.median_non_surviving)},
                       {"sided", SidednessName(c.test.sided)},
                       {"u_statistic", Sig6(c.test.statistic)},
                       {"exact", c.test.exact},
                       {"p_value", Sig6(c.test.p_value)},
                       {"p_adjusted", Sig6(c.p_adjusted)},
                       {"cliffs_delta", Sig6(c.effect.delta)},
                       {"magnitude", MagnitudeName(c.effect.magnitude)}});
  }
  json exclusions = json::object();
  for (const auto& [f, n] : a.exclusions_by_filter) exclusions[f] = n;
  return {{"projects", a.projects},
          {"analyzed", a.analyzed},
          {"excluded", a.excluded},
          {"failed", a.failed},
          {"exclusions_by_filter", std::move(exclusions)},
          {"tf_histogram", Histogram(a.tf_histogram, "tf")},
          {"projects_with_tfdd", a.projects_with_tfdd},
          {"tfdd_rate", Sig6(a.tfdd_rate)},
          {"events_per_project", Histogram(a.events_per_project, "events")},
          {"tfdd_by_tf", Histogram(a.tfdd_by_tf, "tf")},
          {"repo_age_years", Histogram(a.repo_age_years, "years")},
          {"tfdd_timing_years", Histogram(a.tfdd_timing_years, "years")},
          {"survived", a.survived},
          {"survival_rate", a.survival_rate ? json(Sig6(*a.survival_rate)) : json()},
          {"new_tf_developer_count", Histogram(a.new_tf_developer_count, "developers")},
          {"attraction_delay_years", Histogram(a.attraction_delay_years, "years")},
          {"survived_newcomers_only", a.survived_newcomers_only},
          {"survived_old_contributors_only", a.survived_old_contributors_only},
          {"survived_mixed", a.survived_mixed},
          {"cohort_comparisons", std::move(cohorts)}};
}

std::string HistogramCsv(const std::map<int, int>& h, const char* key) {
  std::string out = absl::StrCat(key, ",count\n");
  for (const auto& [k, v] : h) absl::StrAppend(&out, k, ",", v, "\n");
  return out;
}

}  // namespace

absl::StatusOr<ReportFormat> ParseReportFormat(absl::string_view name) {
  if (name == "json") return ReportFormat::kJson;
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "all") return ReportFormat::kAll;
  return absl::InvalidArgumentError(absl::StrCat("unknown report format '", name, "'"));
}

double Sig6(double v) { return std::strtod(Num(v).c_str(), nullptr); }

std::string RenderReportJson(const CorpusReport& report) {
  json projects = json::array();
  for (const ProjectOutcome& p : report.projects) projects.push_back(ProjectJson(p));
  json j = {{"schema_version", report.schema_version},
            {"projects", std::move(projects)},
            {"aggregates", AggregatesJson(report.aggregates)}};
  return j.dump(2) + "\n";
}

std::vector<std::pair<std::string, std::string>> RenderReportCsv(const CorpusReport& report) {
  const CorpusAggregates& a = report.aggregates;
  std::vector<std::pair<std::string, std::string>> files;

  std::string projects =
      "repo_id,status,excluded_by,commits,alias_percentage,tf_at_head,events,survived,"
      "new_tf_developers\n";
  for (const ProjectOutcome& p : report.projects) {
    absl::StrAppend(&projects, CsvField(p.repo_id), ",", ProjectStatusName(p.status), ",",
                    p.excluded_by, ",", p.total_commits, ",",
                    p.aliases ? Num(p.aliases->alias_percentage) : "", ",",
                    p.tf_at_head ? absl::StrCat(p.tf_at_head->tf) : "", ",",
                    p.timeline ? absl::StrCat(p.timeline->events.size()) : "", ",",
                    p.has_tfdd() ? (p.survived() ? "true" : "false") : "", ",",
                    p.survived() ? absl::StrJoin(p.timeline->survival.new_tf_developers, ";")
                                 : "",
                    "\n");
  }
  files.emplace_back("projects.csv", std::move(projects));
  files.emplace_back("tf_histogram.csv", HistogramCsv(a.tf_histogram, "tf"));
  files.emplace_back("tfdd_by_tf.csv", HistogramCsv(a.tfdd_by_tf, "tf"));
  files.emplace_back("repo_age.csv", HistogramCsv(a.repo_age_years, "years"));
  files.emplace_back("tfdd_timing.csv", HistogramCsv(a.tfdd_timing_years, "years"));

  std::string after = "repo_id,survived,commits_after,pct_commits_after,new_tf_file_share\n";
  for (const CommitsAfterRow& r : a.commits_after) {
    absl::StrAppend(&after, CsvField(r.repo_id), ",", r.survived ? "true" : "false", ",",
                    r.commits_after, ",", Num(r.pct_commits_after), ",",
                    Num(r.new_tf_file_share), "\n");
  }
  files.emplace_back("commits_after.csv", std::move(after));

  std::string cohorts =
      "metric,family,n_surviving,n_non_surviving,median_surviving,median_non_surviving,"
      "sided,u_statistic,p_value,p_adjusted,cliffs_delta,magnitude\n";
  for (const CohortComparison& c : a.cohorts) {
    absl::StrAppend(&cohorts, c.metric, ",", c.family, ",", c.n_surviving, ",",
                    c.n_non_surviving, ",", Num(c.median_surviving), ",",
                    Num(c.median_non_surviving), ",", SidednessName(c.test.sided), ",",
                    Num(c.test.statistic), ",", Num(c.test.p_value), ",", Num(c.p_adjusted),
                    ",", Num(c.effect.delta), ",", MagnitudeName(c.effect.magnitude), "\n");
  }
  files.emplace_back("cohort_comparison.csv", std::move(cohorts));

  std::string survival = "measure,key,count\n";
  for (const auto& [y, n] : a.attraction_delay_years) {
    absl::StrAppend(&survival, "attraction_delay_years,", y, ",", n, "\n");
  }
  for (const auto& [k, n] : a.new_tf_developer_count) {
    absl::StrAppend(&survival, "new_tf_developers,", k, ",", n, "\n");
  }
  if (a.survived > 0) {
    absl::StrAppend(&survival, "composition,newcomers_only,", a.survived_newcomers_only, "\n",
                    "composition,old_contributors_only,", a.survived_old_contributors_only,
                    "\n", "composition,mixed,", a.survived_mixed, "\n");
  }
  files.emplace_back("survival.csv", std::move(survival));
  return files;
}

absl::StatusOr<std::vector<std::filesystem::path>> EmitReport(
    const CorpusReport& report, ReportFormat format, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    return absl::PermissionDeniedError(
        absl::StrCat("cannot create ", out_dir.string(), ": ", ec.message()));
  }
  std::vector<std::pair<std::string, std::string>> files;
  if (format != ReportFormat::kCsv) files.emplace_back("report.json", RenderReportJson(report));
  if (format != ReportFormat::kJson) {
    for (auto& f : RenderReportCsv(report)) files.push_back(std::move(f));
  }
  std::vector<std::filesystem::path> written;
  for (const auto& [name, content] : files) {
    const std::filesystem::path path = out_dir / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
    out.close();
    if (!out) return absl::DataLossError(absl::StrCat("failed writing ", path.string()));
    written.push_back(path);
  }
  return written;
}

std::string RenderSensitivityCsv(const SensitivityReport& report) {
  std::string out = "threshold,precision,improvement,harmonic_mean\n";
  for (const SensitivityRow& r : report.rows) {
    absl::StrAppend(&out, FormatDurationSpec(r.threshold), ",", Num(r.precision), ",",
                    r.improvement ? Num(*r.improvement) : "-", ",",
                    r.harmonic_mean ? Num(*r.harmonic_mean) : "-", "\n");
  }
  return out;
}

}  // namespace tflife
