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


#include "tflifeline/identity.h"

#include <atomic>
#include <fstream>
#include <thread>

#include "absl/strings/str_cat.h"
#include "gtest/gtest.h"
#include "httplib.h"
#include "test_support.h"

namespace tflife {
namespace {

using testing::Add;
using testing::Day;
using testing::Mod;

CommitRecord By(std::string id, std::string name, std::string email, Instant t) {
  return {std::move(id), std::move(name), std::move(email), t, {Mod("f")}, false, ""};
}

RepositoryHistory Authors(const std::vector<std::pair<std::string, std::string>>& who) {
  std::vector<CommitRecord> commits;
  for (size_t i = 0; i < who.size(); ++i) {
    commits.push_back(By(absl::StrCat("c", i), who[i].first, who[i].second,
                         Day(2020, 1, 1) + absl::Hours(24 * i)));
  }
  return *RepositoryHistory::Create("r", std::move(commits));
}

TEST(AliasMappingTest, TwoEmailsOneDeveloper) {
  const AliasMapping m = *AliasMapping::Parse(R"({"ann": ["ann@a.org", "Ann@B.org"]})");
  const RepositoryHistory h = Authors({{"Ann", "ann@a.org"}, {"Ann K", "ann@b.org"}});
  const ResolutionResult r = *ResolveAliases(h, &m, nullptr, "");
  EXPECT_EQ(r.report.raw_identities, 2);
  EXPECT_EQ(r.report.canonical_developers, 1);
  EXPECT_DOUBLE_EQ(r.report.alias_percentage, 0.5);
  EXPECT_EQ(r.history.commits()[1].dev_id, "ann");
  EXPECT_EQ(r.developers[0].source, ResolutionSource::kMappingFile);
}

TEST(AliasMappingTest, DistinctEmailsAreUntouched) {
  const RepositoryHistory h = Authors({{"A", "a@x"}, {"B", "b@x"}, {"C", "c@x"}});
  const ResolutionResult r = *ResolveAliases(h, nullptr, nullptr, "");
  EXPECT_EQ(r.report.alias_percentage, 0.0);
  EXPECT_EQ(r.developers.size(), 3u);
  EXPECT_EQ(r.developers[0].source, ResolutionSource::kUntouched);
}

TEST(AliasMappingTest, NineIdentitiesEightDevelopers) {
  std::vector<std::pair<std::string, std::string>> who;
  for (int i = 0; i < 8; ++i) who.push_back({absl::StrCat("d", i), absl::StrCat("d", i, "@x")});
  who.push_back({"d0 (laptop)", "d0@laptop"});
  const AliasMapping m = *AliasMapping::Parse(R"({"d0": ["d0@x", "d0@laptop"]})");
  const ResolutionResult r = *ResolveAliases(Authors(who), &m, nullptr, "");
  EXPECT_EQ(r.report.raw_identities, 9);
  EXPECT_EQ(r.report.canonical_developers, 8);
  EXPECT_NEAR(r.report.alias_percentage, 1.0 / 9.0, 1e-12);
  EXPECT_EQ(testing::RoundTo(r.report.alias_percentage, 2), 0.11);
}

TEST(AliasMappingTest, ConflictingClaimsAreRejected) {
  EXPECT_FALSE(AliasMapping::Parse(R"({"a": ["x@y"], "b": ["X@Y"]})").ok());
  EXPECT_FALSE(AliasMapping::Parse(R"(["x@y"])").ok());
  EXPECT_FALSE(AliasMapping::Parse("{").ok());
}

TEST(AliasMappingTest, ResolutionIsIdempotentAndDisjoint) {
  const AliasMapping m = *AliasMapping::Parse(R"({"p": ["p@1", "p@2"], "q": ["q@1"]})");
  const RepositoryHistory h =
      Authors({{"P", "p@1"}, {"Q", "q@1"}, {"P", "p@2"}, {"R", "r@1"}, {"P", "P@1"}});
  const ResolutionResult once = *ResolveAliases(h, &m, nullptr, "");
  const ResolutionResult twice = *ResolveAliases(once.history, &m, nullptr, "");
  EXPECT_EQ(once.history.commits(), twice.history.commits());
  std::set<std::string> seen;
  for (const CanonicalDeveloper& d : once.developers) {
    for (const RawIdentity& raw : d.aliases) EXPECT_TRUE(seen.insert(raw.Key()).second);
  }
  EXPECT_EQ(seen.size(), 4u);  // emails compare case-insensitively
}

// Serves recorded commit -> account responses for repository o/r.
class RecordedApi {
 public:
  RecordedApi() {
    server_.Get(R"(/api/repos/o/r/commits/(\w+))", [this](const httplib::Request& req,
                                                           httplib::Response& res) {
      ++hits_;
      const std::string sha = req.matches[1];
      if (sha == "flaky" && flaky_failures_ > 0) {
        --flaky_failures_;
        res.status = 429;
        return;
      }
      if (sha == "broken") {
        res.status = 500;
        return;
      }
      static const std::map<std::string, std::string> kAccounts = {
          {"c1", "octo"}, {"c2", "octo"}, {"flaky", "patient"}, {"noauthor", ""}};
      auto it = kAccounts.find(sha);
      if (it == kAccounts.end()) {
        res.status = 422;
        return;
      }
      const std::string author =
          it->second.empty() ? "null" : absl::StrCat(R"({"login":")", it->second, R"("})");
      res.set_content(absl::StrCat(R"({"sha":")", sha, R"(","author":)", author, "}"),
                      "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~RecordedApi() {
    server_.stop();
    thread_.join();
  }

  AccountLookupOptions Options(std::filesystem::path cache = {}) const {
    AccountLookupOptions o;
    o.base_url = absl::StrCat("http://127.0.0.1:", port_, "/api");
    o.cache_file = std::move(cache);
    o.initial_backoff = absl::Milliseconds(5);
    o.max_attempts = 3;
    o.timeout = absl::Seconds(5);
    return o;
  }
  int hits() const { return hits_; }
  std::atomic<int> flaky_failures_{2};

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<int> hits_{0};
};

std::filesystem::path TempCache(absl::string_view name) {
  const auto p = std::filesystem::temp_directory_path() / absl::StrCat("tflife_", name, ".jsonl");
  std::filesystem::remove(p);
  return p;
}

TEST(RemoteLookupTest, CacheHitNeedsNoNetwork) {
  const auto cache = TempCache("cache_hit");
  std::ofstream(cache) << R"({"repo":"o/r","commit":"abc","account":"cached"})" << "\n"
                       << R"({"repo":"o/r","commit":"def","account":null})" << "\n";
  AccountLookupOptions o;
  o.base_url = "http://127.0.0.1:9";  // nothing listens here
  o.cache_file = cache;
  auto client = *CachedAccountLookup::Open(o);
  EXPECT_EQ(*client->Lookup("o/r", "abc"), std::optional<std::string>("cached"));
  EXPECT_EQ(*client->Lookup("o/r", "def"), std::nullopt);
  EXPECT_EQ(client->requests_sent(), 0);
}

TEST(RemoteLookupTest, UnknownCommitIsAbsent) {
  RecordedApi api;
  auto client = *CachedAccountLookup::Open(api.Options());
  EXPECT_EQ(*client->Lookup("o/r", "zzz"), std::nullopt);
  EXPECT_EQ(*client->Lookup("o/r", "noauthor"), std::nullopt);
}

TEST(RemoteLookupTest, TwoEmailsSameAccountMerge) {
  RecordedApi api;
  const auto cache = TempCache("merge");
  auto client = *CachedAccountLookup::Open(api.Options(cache));
  std::vector<CommitRecord> commits = {By("c1", "Octo", "octo@home", Day(2020, 1, 1)),
                                       By("c2", "Octo Cat", "octo@work", Day(2020, 2, 1)),
                                       By("c3", "Octo", "octo@home", Day(2020, 3, 1))};
  const RepositoryHistory h = *RepositoryHistory::Create("r", commits);
  const ResolutionResult r = *ResolveAliases(h, nullptr, client.get(), "o/r");
  EXPECT_EQ(r.report.canonical_developers, 1);
  EXPECT_DOUBLE_EQ(r.report.alias_percentage, 0.5);
  for (const CommitRecord& c : r.history.commits()) EXPECT_EQ(c.dev_id, "octo");
  EXPECT_EQ(api.hits(), 2);  // one lookup per raw identity

  // A rerun is served from the on-disk cache.
  auto offline = *CachedAccountLookup::Open(api.Options(cache));
  const ResolutionResult again = *ResolveAliases(h, nullptr, offline.get(), "o/r");
  EXPECT_EQ(offline->requests_sent(), 0);
  EXPECT_EQ(again.history.commits(), r.history.commits());
}

TEST(RemoteLookupTest, RateLimitIsRetried) {
  RecordedApi api;
  auto client = *CachedAccountLookup::Open(api.Options());
  EXPECT_EQ(*client->Lookup("o/r", "flaky"), std::optional<std::string>("patient"));
  EXPECT_EQ(client->requests_sent(), 3);
}

TEST(RemoteLookupTest, FailureFallsBackWithWarning) {
  RecordedApi api;
  auto client = *CachedAccountLookup::Open(api.Options());
  EXPECT_FALSE(client->Lookup("o/r", "broken").ok());
  EXPECT_EQ(client->requests_sent(), 3);  // bounded attempts

  const RepositoryHistory h =
      *RepositoryHistory::Create("r", {By("broken", "B", "b@x", Day(2020, 1, 1))});
  const ResolutionResult r = *ResolveAliases(h, nullptr, client.get(), "o/r");
  EXPECT_EQ(r.history.commits()[0].dev_id, "b@x");
  ASSERT_EQ(r.warnings.size(), 1u);
}

TEST(RemoteLookupTest, MappingTakesPrecedence) {
  RecordedApi api;
  auto client = *CachedAccountLookup::Open(api.Options());
  const AliasMapping m = *AliasMapping::Parse(R"({"mapped": ["octo@home"]})");
  const RepositoryHistory h =
      *RepositoryHistory::Create("r", {By("c1", "Octo", "octo@home", Day(2020, 1, 1))});
  const ResolutionResult r = *ResolveAliases(h, &m, client.get(), "o/r");
  EXPECT_EQ(r.history.commits()[0].dev_id, "mapped");
  EXPECT_EQ(api.hits(), 0);
}

}  // namespace
}  // namespace tflife
