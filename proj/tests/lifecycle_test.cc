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

#include <random>

#include "gtest/gtest.h"
#include "test_support.h"

namespace tflife {
namespace {

using testing::Add;
using testing::Day;
using testing::HistoryBuilder;
using testing::Mod;

std::set<std::string> Devs(std::initializer_list<const char*> names) {
  return std::set<std::string>(names.begin(), names.end());
}

TEST(AbandonerTest, Examples) {
  HistoryBuilder b;
  b.Commit(Day(2014, 1, 1), "old", {Add("a")})
      .Commit(Day(2014, 6, 1), "old", {Mod("a")})
      .Commit(Day(2015, 12, 1), "now", {Mod("a")});
  const RepositoryHistory h = b.Build();
  const AbandonmentPolicy p;
  EXPECT_FALSE(*IsAbandoner("now", h, p));
  EXPECT_TRUE(*IsAbandoner("old", h, p));  // 18 months before head
  EXPECT_FALSE(IsAbandoner("nobody", h, p).ok());
  // Anchored at a snapshot instead of head, the same gap may not count yet.
  const AbandonmentPolicy at_snapshot{Years(1), AbandonmentAnchor::kSnapshot};
  EXPECT_FALSE(*IsAbandoner("old", h, at_snapshot, Day(2015, 1, 1)));
  EXPECT_TRUE(*IsAbandoner("old", h, at_snapshot, Day(2015, 7, 1)));
}

TEST(AbandonerTest, BobIsJudgedAgainstHead) {
  const RepositoryHistory h = testing::LoadResolvedFixture("satis.jsonl");
  // Bob's last commit is one month before the January 2016 snapshot.
  EXPECT_TRUE(*IsAbandoner("bob", h, AbandonmentPolicy()));
  EXPECT_FALSE(*IsAbandoner("bob", h, {Years(1), AbandonmentAnchor::kSnapshot},
                            Day(2016, 1, 15)));
}

TEST(AbandonerTest, LargerThresholdNeverAddsAbandoners) {
  std::mt19937_64 rng(43);
  for (int round = 0; round < 50; ++round) {
    const RepositoryHistory h = testing::RandomLifecycleHistory(rng, 6, 5);
    for (const auto& [dev, a] : IndexActivity(h)) {
      bool was = true;
      for (double years : {0.25, 0.5, 1.0, 1.5, 2.0, 3.0}) {
        const bool now = *IsAbandoner(dev, h, {Years(years), AbandonmentAnchor::kHead});
        EXPECT_TRUE(was || !now);
        was = now;
      }
    }
  }
}

TEST(SnapshotsTest, YearlyFromCreation) {
  HistoryBuilder b;
  b.Commit(Day(2010, 3, 1), "a", {Add("x")}).Commit(Day(2013, 3, 2), "a", {Mod("x")});
  const std::vector<TimelinePoint> points = PeriodicSnapshots(b.Build(), {});
  ASSERT_EQ(points.size(), 3u);
  EXPECT_EQ(points[0].as_of, Day(2011, 3, 1));
  EXPECT_EQ(points[2].as_of, Day(2013, 3, 1));
  for (const TimelinePoint& p : points) EXPECT_EQ(p.snapshot->tf, 1);
}

TEST(SnapshotsTest, GapsAreCarried) {
  HistoryBuilder b;
  b.Commit(Day(2010, 3, 1), "a", {Add("doc.md")})
      .Commit(Day(2011, 6, 1), "a", {Add("x.c")})
      .Commit(Day(2012, 3, 5), "a", {Mod("x.c")});
  LifecycleOptions o;
  o.rules = *PathRules::Parse("include:*.c");
  const std::vector<TimelinePoint> points = PeriodicSnapshots(b.Build(), o);
  ASSERT_EQ(points.size(), 2u);
  EXPECT_FALSE(points[0].snapshot.has_value());
  EXPECT_FALSE(points[0].gap_reason.empty());
  EXPECT_EQ(points[1].snapshot->tf, 1);  // cumulative history
}

TEST(TimelineTest, SatisNarrative) {
  const RepositoryHistory h = testing::LoadResolvedFixture("satis.jsonl");
  const LifecycleTimeline t = *AnalyzeLifecycle(h, {});
  ASSERT_EQ(t.points.size(), 3u);
  EXPECT_EQ(t.points[0].snapshot->tf_developers, Devs({"alice"}));
  EXPECT_EQ(t.points[1].snapshot->tf_developers, Devs({"alice", "bob"}));
  ASSERT_EQ(t.events.size(), 1u);
  EXPECT_EQ(t.events[0].occurred_at, Day(2015, 12, 10));
  EXPECT_EQ(t.events[0].detected_at, Day(2016, 1, 15));
  EXPECT_EQ(t.states, (std::vector<ProjectState>{ProjectState::kActive, ProjectState::kInactive,
                                                 ProjectState::kActive}));
  EXPECT_TRUE(t.survival.survived);
  EXPECT_EQ(t.survival.new_tf_developers, Devs({"charlotte"}));
  EXPECT_EQ(t.survival.newcomer_split.at("charlotte"), ContributorKind::kNewcomer);
  EXPECT_EQ(t.survival.attraction_delay_years, 1);
  ASSERT_TRUE(t.post_tfdd.has_value());
  EXPECT_DOUBLE_EQ(t.post_tfdd->new_tf_file_share, 0.41);
}

TEST(TimelineTest, SteadyProjectHasNoEvents) {
  const LifecycleTimeline t = *AnalyzeLifecycle(testing::LoadFixture("steady.jsonl"), {});
  EXPECT_TRUE(t.events.empty());
  EXPECT_FALSE(t.survival.survived);
  EXPECT_FALSE(t.post_tfdd.has_value());
  EXPECT_FALSE(ClassifySurvival(t.points, t.events, testing::LoadFixture("steady.jsonl"), {})
                   .ok());
}

TEST(TimelineTest, MinorActivityDoesNotRevive) {
  const LifecycleTimeline t = *AnalyzeLifecycle(testing::LoadFixture("abandoned.jsonl"), {});
  ASSERT_EQ(t.events.size(), 1u);
  EXPECT_FALSE(t.survival.survived);
  EXPECT_TRUE(t.survival.new_tf_developers.empty());
  for (size_t i = 1; i < t.states.size(); ++i) EXPECT_EQ(t.states[i], ProjectState::kInactive);
}

TEST(TimelineTest, ReturningContributorIsOld) {
  HistoryBuilder b;
  b.Commit(Day(2010, 1, 1), "ann", {Add("a1")});
  b.Commit(Day(2010, 2, 1), "cid", {Mod("a1")});
  for (int i = 2; i <= 6; ++i) b.Commit(Day(2010, i + 1, 1), "ann", {Add("a" + std::to_string(i))});
  b.Commit(Day(2011, 6, 1), "ann", {Mod("a1")});
  for (int i = 1; i <= 12; ++i) b.Commit(Day(2012, 2, i), "cid", {Add("c" + std::to_string(i))});
  b.Commit(Day(2014, 3, 1), "cid", {Mod("c1")});
  const LifecycleTimeline t = *AnalyzeLifecycle(b.Build(), {});
  ASSERT_EQ(t.events.size(), 1u);
  EXPECT_EQ(t.events[0].occurred_at, Day(2011, 6, 1));
  EXPECT_TRUE(t.survival.survived);
  EXPECT_EQ(t.survival.newcomer_split.at("cid"), ContributorKind::kOldContributor);
}

TEST(PostTfddTest, CountsCommitsAfterTheEvent) {
  HistoryBuilder b;
  for (int i = 0; i < 10; ++i) b.Commit(Day(2010, 1, 1 + i), "a", {i == 0 ? Add("x") : Mod("x")});
  const RepositoryHistory h = b.Build();
  const AuthorshipTable head = *BuildAuthorshipTable(h, h.head_at());
  TfddEvent e{Day(2011, 1, 1), Day(2010, 1, 6), Devs({"a"}), 1};
  PostTfddMetrics m = ComputePostTfddMetrics(h, e, {}, head);
  EXPECT_EQ(m.commits_after, 4);
  EXPECT_DOUBLE_EQ(m.pct_commits_after, 0.4);
  EXPECT_EQ(m.new_tf_file_share, 0.0);

  e.occurred_at = Day(2010, 1, 10);
  m = ComputePostTfddMetrics(h, e, {}, head);
  EXPECT_EQ(m.commits_after, 0);
  EXPECT_EQ(m.pct_commits_after, 0.0);
}

TEST(TimelineTest, InvariantsOnRandomHistories) {
  std::mt19937_64 rng(47);
  for (int round = 0; round < 200; ++round) {
    const RepositoryHistory h = testing::RandomLifecycleHistory(rng, 6, 6);
    const LifecycleTimeline t = *AnalyzeLifecycle(h, {});
    // Each event is entered from Active and every Active follows a revival.
    size_t event = 0;
    ProjectState prev = ProjectState::kActive;
    for (size_t i = 0; i < t.points.size(); ++i) {
      const bool fired = event < t.events.size() && t.events[event].detected_at == t.points[i].as_of;
      if (fired) {
        EXPECT_EQ(prev, ProjectState::kActive);
        EXPECT_EQ(t.states[i], ProjectState::kInactive);
        ++event;
      } else if (prev == ProjectState::kActive) {
        EXPECT_EQ(t.states[i], ProjectState::kActive);
      }
      prev = t.states[i];
    }
    EXPECT_EQ(event, t.events.size());
    for (size_t i = 1; i < t.events.size(); ++i) {
      EXPECT_GT(t.events[i].occurred_at, t.events[i - 1].occurred_at);
      EXPECT_GT(t.events[i].detected_at, t.events[i - 1].detected_at);
    }
    for (const TfddEvent& e : t.events) EXPECT_LT(e.occurred_at, e.detected_at);
    if (!t.events.empty()) {
      EXPECT_EQ(t.survival.survived, !t.survival.new_tf_developers.empty());
      EXPECT_LE(t.post_tfdd->pct_commits_after, 1.0);
      EXPECT_LE(t.post_tfdd->new_tf_file_share, 1.0);
    }
  }
}

TEST(TimelineTest, MatchesDefinitionEvaluation) {
  std::mt19937_64 rng(53);
  for (const AbandonmentAnchor anchor : {AbandonmentAnchor::kHead, AbandonmentAnchor::kSnapshot}) {
    for (int round = 0; round < 300; ++round) {
      const RepositoryHistory h = testing::RandomLifecycleHistory(rng, 6, 6);
      LifecycleOptions o;
      o.policy.anchor = anchor;
      const LifecycleTimeline t = *AnalyzeLifecycle(h, o);
      const testing::LifecycleVerdict want = testing::EvaluateLifecycle(t.points, h, o.policy);
      ASSERT_EQ(t.events.size(), want.events.size()) << "round " << round;
      for (size_t i = 0; i < want.events.size(); ++i) {
        EXPECT_EQ(t.events[i].detected_at, want.events[i].detected_at);
        EXPECT_EQ(t.events[i].occurred_at, want.events[i].occurred_at);
        EXPECT_EQ(t.events[i].detached, want.events[i].detached);
      }
      EXPECT_EQ(t.survival.survived, want.survived);
      EXPECT_EQ(t.survival.new_tf_developers, want.new_tf_developers);
      EXPECT_EQ(t.survival.newcomer_split, want.split);
    }
  }
}

}  // namespace
}  // namespace tflife
