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


// Shared helpers for the test binaries: compact history construction,
// randomized inputs, and reference implementations used as oracles.

#ifndef TFLIFELINE_TESTS_TEST_SUPPORT_H_
#define TFLIFELINE_TESTS_TEST_SUPPORT_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "absl/strings/string_view.h"
#include "tflifeline/authorship.h"
#include "tflifeline/history.h"
#include "tflifeline/identity.h"
#include "tflifeline/lifecycle.h"
#include "tflifeline/sensitivity.h"
#include "tflifeline/stats.h"
#include "tflifeline/time_util.h"

namespace tflife::testing {

std::filesystem::path FixturePath(absl::string_view name);

// Noon UTC on the given civil date.
Instant Day(int y, int m, int d);

FileChange Add(std::string path);
FileChange Mod(std::string path);
FileChange Del(std::string path);
FileChange Ren(std::string from, std::string to);

// Builds histories whose dev ids are the bare developer names.
class HistoryBuilder {
 public:
  HistoryBuilder& Commit(Instant t, absl::string_view dev, std::vector<FileChange> changes);
  RepositoryHistory Build(std::string repo_id = "test") const;

 private:
  std::vector<CommitRecord> commits_;
};

// Loads a normalized-log fixture, aborting the test binary on error.
RepositoryHistory LoadFixture(absl::string_view name);

// Loads a fixture and resolves aliases through tests/fixtures/mapping.json.
RepositoryHistory LoadResolvedFixture(absl::string_view name);

// --- Randomized inputs -----------------------------------------------------

AuthorshipTable RandomAuthorshipTable(std::mt19937_64& rng, int max_devs, int max_files);

RepositoryHistory RandomLifecycleHistory(std::mt19937_64& rng, int max_devs, int max_years);

// Up to `max_commits` commits with a skewed distribution of file additions.
RepositoryHistory RandomMigrationHistory(std::mt19937_64& rng, int max_commits);

// Histories whose span straddles `around`, including exact hits.
RepositoryHistory RandomSpanHistory(std::mt19937_64& rng, absl::Duration around);

// --- Oracles ----------------------------------------------------------------

struct GreedyReplay {
  bool defined = false;
  int tf = 0;
  std::vector<std::string> removal_order;
};

// Literal step-by-step greedy: at every step recount, over the files still
// covered, how many each remaining developer main-authors.
GreedyReplay ReplayGreedy(const AuthorshipTable& table, double threshold = 0.5);

struct LifecycleVerdict {
  std::vector<TfddEvent> events;
  bool survived = false;
  std::set<std::string> new_tf_developers;
  std::map<std::string, ContributorKind> split;
};

// Evaluates the detachment condition at every snapshot independently, then
// collapses conditions not separated by a revival.
LifecycleVerdict EvaluateLifecycle(const std::vector<TimelinePoint>& points,
                                   const RepositoryHistory& history,
                                   const AbandonmentPolicy& policy);

bool BruteForceMigration(const RepositoryHistory& history, int window = 20,
                         double fraction = 0.5);

// Enumerates every assignment of the pooled observations to the groups.
double ExhaustiveMannWhitneyP(const std::vector<double>& a, const std::vector<double>& b,
                              Sidedness sided);
double ExhaustiveMannWhitneyU(const std::vector<double>& a, const std::vector<double>& b);

// Profiles whose error counts over the default grid are 89, 58, 26, 13, 7
// out of 143.
std::vector<InterCommitProfile> CalibratedProfiles();

double RoundTo(double v, int decimals);

}  // namespace tflife::testing

#endif  // TFLIFELINE_TESTS_TEST_SUPPORT_H_
