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


#include <fstream>
#include <sstream>

#include "absl/strings/match.h"
#include "absl/strings/str_cat.h"
#include "gtest/gtest.h"
#include "nlohmann/json.hpp"
#include "test_support.h"
#include "tflifeline/config.h"
#include "tflifeline/corpus.h"
#include "tflifeline/report.h"

namespace tflife {
namespace {

std::filesystem::path TempDir(absl::string_view name) {
  const auto p = std::filesystem::temp_directory_path() / absl::StrCat("tflife_", name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

std::string Slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunOptions FixtureOptions(int jobs = 2) {
  RunOptions o;
  o.config = *LoadConfig(testing::FixturePath("corpus.toml"));
  o.jobs = jobs;
  return o;
}

const ProjectOutcome& Find(const CorpusReport& r, absl::string_view id) {
  for (const ProjectOutcome& p : r.projects) {
    if (p.repo_id == id) return p;
  }
  ADD_FAILURE() << "no project " << id;
  return r.projects.front();
}

TEST(ProjectListTest, ParsesPathsLocatorsAndComments) {
  const auto entries = *ParseProjectList("# corpus\n a.jsonl \n\nrepos/b  owner/b\n");
  ASSERT_EQ(entries.size(), 2u);
  EXPECT_EQ(entries[0].source, "a.jsonl");
  EXPECT_EQ(entries[1].locator, "owner/b");
  EXPECT_FALSE(ParseProjectList("a b c\n").ok());
  EXPECT_FALSE(LoadProjectList("/nonexistent/list.txt").ok());
}

TEST(CorpusTest, FixtureCorpusAggregates) {
  const CorpusReport r = *RunCorpus(testing::FixturePath("corpus.txt"), FixtureOptions());
  const CorpusAggregates& a = r.aggregates;
  EXPECT_EQ(a.projects, 5);
  EXPECT_EQ(a.analyzed, 3);
  EXPECT_EQ(a.excluded, 2);
  EXPECT_EQ(a.failed, 0);
  EXPECT_EQ(a.exclusions_by_filter, (std::map<std::string, int>{{"corrupted_migration", 1},
                                                                 {"longevity", 1}}));
  EXPECT_DOUBLE_EQ(a.tfdd_rate, 2.0 / 3.0);
  ASSERT_TRUE(a.survival_rate.has_value());
  EXPECT_DOUBLE_EQ(*a.survival_rate, 0.5);
  EXPECT_EQ(a.tf_histogram, (std::map<int, int>{{1, 2}, {2, 1}}));
  EXPECT_EQ(a.new_tf_developer_count, (std::map<int, int>{{1, 1}}));
  EXPECT_EQ(a.survived_newcomers_only, 1);

  const ProjectOutcome& satis = Find(r, "satis.jsonl");
  EXPECT_TRUE(satis.survived());
  EXPECT_NEAR(satis.aliases->alias_percentage, 0.2, 1e-12);
  EXPECT_EQ(Find(r, "young.jsonl").excluded_by, "longevity");
  EXPECT_EQ(Find(r, "migrated.jsonl").excluded_by, "corrupted_migration");
  EXPECT_FALSE(Find(r, "steady.jsonl").has_tfdd());

  // Partition of the input list.
  for (const ProjectOutcome& p : r.projects) {
    EXPECT_EQ(p.status == ProjectStatus::kExcluded, !p.excluded_by.empty()) << p.repo_id;
  }
  ASSERT_EQ(a.cohorts.size(), 6u);
  for (const CohortComparison& c : a.cohorts) {
    EXPECT_GE(c.p_adjusted, c.test.p_value);
    EXPECT_LE(c.p_adjusted, 1.0);
  }
}

TEST(CorpusTest, FailuresAreRecordedNotFatal) {
  const std::vector<ProjectEntry> entries = {{"missing.jsonl", ""}, {"steady.jsonl", ""}};
  const CorpusReport r =
      RunEntries(entries, testing::FixturePath(""), FixtureOptions());
  EXPECT_EQ(r.aggregates.failed, 1);
  EXPECT_EQ(r.aggregates.analyzed, 1);
  EXPECT_FALSE(Find(r, "missing.jsonl").failure.empty());
}

TEST(CorpusTest, AllTooShort) {
  const std::vector<ProjectEntry> entries = {{"young.jsonl", ""}, {"young.jsonl", "dup"}};
  const CorpusReport r = RunEntries(entries, testing::FixturePath(""), FixtureOptions());
  EXPECT_EQ(r.aggregates.analyzed, 0);
  EXPECT_EQ(r.aggregates.excluded, 2);
  EXPECT_EQ(r.aggregates.exclusions_by_filter.at("longevity"), 2);
  EXPECT_FALSE(r.aggregates.survival_rate.has_value());
}

TEST(CorpusTest, WorkerCountDoesNotChangeTheReport) {
  const CorpusReport one = *RunCorpus(testing::FixturePath("corpus.txt"), FixtureOptions(1));
  const CorpusReport four = *RunCorpus(testing::FixturePath("corpus.txt"), FixtureOptions(4));
  EXPECT_EQ(RenderReportJson(one), RenderReportJson(four));
}

TEST(ReportTest, EmptyCorpusIsValid) {
  const CorpusReport r = RunEntries({}, ".", FixtureOptions());
  const nlohmann::json j = nlohmann::json::parse(RenderReportJson(r));
  EXPECT_EQ(j.at("schema_version"), kReportSchemaVersion);
  EXPECT_TRUE(j.at("projects").empty());
  for (const auto& [name, body] : RenderReportCsv(r)) {
    EXPECT_EQ(std::count(body.begin(), body.end(), '\n'), 1) << name;  // header only
  }
}

TEST(ReportTest, CsvTablesAndDeterministicFiles) {
  const CorpusReport r = *RunCorpus(testing::FixturePath("corpus.txt"), FixtureOptions());
  const auto dir1 = TempDir("report1"), dir2 = TempDir("report2");
  const auto files1 = *EmitReport(r, ReportFormat::kAll, dir1);
  const auto files2 = *EmitReport(r, ReportFormat::kAll, dir2);
  ASSERT_EQ(files1.size(), files2.size());
  for (size_t i = 0; i < files1.size(); ++i) {
    EXPECT_EQ(Slurp(files1[i]), Slurp(files2[i])) << files1[i];
  }
  const std::string hist = Slurp(dir1 / "tf_histogram.csv");
  EXPECT_TRUE(absl::StrContains(hist, "\n1,2\n")) << hist;
  EXPECT_TRUE(absl::StrContains(Slurp(dir1 / "projects.csv"), "young.jsonl,excluded,longevity"));
}

TEST(ReportTest, FloatsUseSixSignificantDigits) {
  EXPECT_EQ(Sig6(2.0 / 3.0), 0.666667);
  EXPECT_EQ(Sig6(0.41), 0.41);
  EXPECT_EQ(Sig6(123456789.0), 123457000.0);
  EXPECT_FALSE(ParseReportFormat("xml").ok());
}

}  // namespace
}  // namespace tflife
