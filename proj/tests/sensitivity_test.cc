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

#include <random>

#include "absl/strings/str_cat.h"
#include "gtest/gtest.h"
#include "test_support.h"

namespace tflife {
namespace {

using testing::Add;
using testing::Day;
using testing::HistoryBuilder;
using testing::Mod;

InterCommitProfile Gaps(std::vector<double> days) {
  InterCommitProfile p{"r", "d", {}};
  for (double d : days) p.deltas.push_back(Days(d));
  return p;
}

TEST(ProfileTest, DeltasBetweenConsecutiveCommits) {
  HistoryBuilder b;
  b.Commit(Day(2020, 1, 1), "a", {Add("x")})
      .Commit(Day(2020, 1, 11), "a", {Mod("x")})
      .Commit(Day(2020, 1, 1) + absl::Hours(24 * 400), "a", {Mod("x")})
      .Commit(Day(2020, 5, 1), "once", {Mod("x")});
  const std::vector<InterCommitProfile> p = ProfileDevelopers(b.Build(), {"a", "once"});
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p[0].dev_id, "a");
  EXPECT_EQ(p[0].deltas, (std::vector<absl::Duration>{Days(10), Days(390)}));
}

TEST(ProfileTest, OneProfilePerRepository) {
  HistoryBuilder r1, r2;
  r1.Commit(Day(2020, 1, 1), "a", {Add("x")}).Commit(Day(2020, 1, 3), "a", {Mod("x")});
  r2.Commit(Day(2021, 1, 1), "a", {Add("y")}).Commit(Day(2021, 1, 8), "a", {Mod("y")});
  std::vector<InterCommitProfile> all = ProfileDevelopers(r1.Build("one"), {"a"});
  for (auto& p : ProfileDevelopers(r2.Build("two"), {"a"})) all.push_back(p);
  ASSERT_EQ(all.size(), 2u);
  EXPECT_EQ(all[0].deltas, (std::vector<absl::Duration>{Days(2)}));
  EXPECT_EQ(all[1].deltas, (std::vector<absl::Duration>{Days(7)}));
  EXPECT_NE(all[0].repo_id, all[1].repo_id);
}

TEST(ProfileTest, DeltaCountAndSign) {
  std::mt19937_64 rng(59);
  for (int round = 0; round < 30; ++round) {
    const RepositoryHistory h = testing::RandomLifecycleHistory(rng, 5, 4);
    const auto activity = IndexActivity(h);
    std::set<std::string> devs;
    for (const auto& [dev, a] : activity) devs.insert(dev);
    for (const InterCommitProfile& p : ProfileDevelopers(h, devs)) {
      EXPECT_EQ(static_cast<int64_t>(p.deltas.size()), activity.at(p.dev_id).commits - 1);
      for (absl::Duration d : p.deltas) EXPECT_GE(d, absl::ZeroDuration());
    }
  }
}

TEST(PrecisionTest, Examples) {
  std::vector<InterCommitProfile> quiet(5, Gaps({1, 2, 3}));
  EXPECT_EQ(*PrecisionOf(Years(1), quiet), 1.0);
  std::vector<InterCommitProfile> ten(8, Gaps({10}));
  ten.push_back(Gaps({400}));
  ten.push_back(Gaps({10, 500}));
  EXPECT_DOUBLE_EQ(*PrecisionOf(Years(1), ten), 0.8);
  EXPECT_FALSE(PrecisionOf(Years(1), std::vector<InterCommitProfile>{}).ok());
}

TEST(PrecisionTest, ZeroErrorMatchesPerDeltaScan) {
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> gap(0, 900);
  for (int round = 0; round < 500; ++round) {
    std::vector<double> days(1 + rng() % 6);
    for (double& d : days) d = gap(rng);
    const InterCommitProfile p = Gaps(days);
    for (absl::Duration t : DefaultThresholdGrid()) {
      bool any = false;
      for (absl::Duration d : p.deltas) any = any || d >= t;
      EXPECT_EQ(HasError(p, t), any);
    }
  }
}

TEST(ImprovementTest, Examples) {
  const std::vector<InterCommitProfile> fixed = {Gaps({100}), Gaps({200}), Gaps({10})};
  EXPECT_EQ(**ImprovementOf(Years(1), Months(3), fixed), 1.0);
  const std::vector<InterCommitProfile> stuck = {Gaps({800}), Gaps({900})};
  EXPECT_EQ(**ImprovementOf(Years(2), Months(3), stuck), 0.0);
  const std::vector<InterCommitProfile> quiet = {Gaps({1})};
  EXPECT_FALSE(ImprovementOf(Years(1), Months(3), quiet)->has_value());
  EXPECT_FALSE(ImprovementOf(Months(3), Years(1), fixed).ok());
}

TEST(HarmonicTest, Examples) {
  EXPECT_EQ(testing::RoundTo(*HarmonicMean(0.82, 0.55), 2), 0.66);
  EXPECT_EQ(*HarmonicMean(1.0, 1.0), 1.0);
  EXPECT_NEAR(*HarmonicMean(0.91, 0.50), 0.645390, 1e-6);
  EXPECT_FALSE(HarmonicMean(0.0, 0.0).ok());
  EXPECT_FALSE(HarmonicMean(1.2, 0.5).ok());
}

TEST(HarmonicTest, BoundedByInputs) {
  std::mt19937_64 rng(67);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double p = u(rng), q = u(rng);
    const double h = *HarmonicMean(p, q);
    EXPECT_LE(std::min(p, q), h + 1e-15);
    EXPECT_GE(std::max(p, q), h - 1e-15);
  }
}

TEST(SensitivityTest, CalibratedCorpusReproducesTheTable) {
  const std::vector<InterCommitProfile> profiles = testing::CalibratedProfiles();
  const SensitivityReport r = *AnalyzeSensitivity(DefaultThresholdGrid(), profiles);
  ASSERT_EQ(r.rows.size(), 5u);
  EXPECT_EQ(r.profiles, 143);
  const double precision[] = {0.38, 0.59, 0.82, 0.91, 0.95};
  const double improvement[] = {0, 0.35, 0.55, 0.50, 0.46};
  for (int i = 0; i < 5; ++i) {
    EXPECT_EQ(testing::RoundTo(r.rows[i].precision, 2), precision[i]) << i;
    if (i == 0) {
      EXPECT_FALSE(r.rows[i].improvement.has_value());
      continue;
    }
    EXPECT_EQ(testing::RoundTo(*r.rows[i].improvement, 2), improvement[i]) << i;
    EXPECT_DOUBLE_EQ(*r.rows[i].harmonic_mean,
                     *HarmonicMean(r.rows[i].precision, *r.rows[i].improvement));
  }
}

TEST(SensitivityTest, PrecisionIsMonotone) {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> gap(0, 1000);
  for (int round = 0; round < 100; ++round) {
    std::vector<InterCommitProfile> profiles;
    for (int i = 0; i < 20; ++i) profiles.push_back(Gaps({gap(rng), gap(rng)}));
    const SensitivityReport r = *AnalyzeSensitivity(DefaultThresholdGrid(), profiles);
    for (size_t i = 1; i < r.rows.size(); ++i) {
      EXPECT_LE(r.rows[i - 1].precision, r.rows[i].precision);
    }
  }
}

TEST(SensitivityTest, GridMustAscend) {
  const std::vector<InterCommitProfile> profiles = {Gaps({1})};
  EXPECT_FALSE(AnalyzeSensitivity({Years(1), Months(6)}, profiles).ok());
  EXPECT_FALSE(AnalyzeSensitivity({Years(1), Years(1)}, profiles).ok());
}

}  // namespace
}  // namespace tflife
