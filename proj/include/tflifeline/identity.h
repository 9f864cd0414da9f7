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

#ifndef TFLIFELINE_IDENTITY_H_
#define TFLIFELINE_IDENTITY_H_

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include "absl/strings/string_view.h"
#include <vector>

#include "absl/status/statusor.h"
#include "absl/time/time.h"
#include "tflifeline/history.h"

namespace tflife {

// An author identity as it appears in a commit header. Comparison uses the
// lower-cased e-mail (RawIdentityKey); the stored form keeps the original.
struct RawIdentity {
  std::string name;
  std::string email;

  std::string Key() const { return RawIdentityKey(name, email); }
};

enum class ResolutionSource { kMappingFile, kRemoteLookup, kUntouched };

absl::string_view ResolutionSourceName(ResolutionSource source);

struct CanonicalDeveloper {
  std::string dev_id;
  std::vector<RawIdentity> aliases;  // non-empty, ordered by key
  ResolutionSource source = ResolutionSource::kUntouched;
};

struct AliasReport {
  std::string repo_id;
  int raw_identities = 0;
  int canonical_developers = 0;
  // 1 - canonical_developers / raw_identities.
  double alias_percentage = 0.0;
};

// `{ "<dev_id>": ["email1", "email2", ...] }`. E-mails compare
// case-insensitively; an e-mail listed under two dev ids is an error.
class AliasMapping {
 public:
  static absl::StatusOr<AliasMapping> Parse(absl::string_view json_text);
  static absl::StatusOr<AliasMapping> Load(const std::filesystem::path& file);

  std::optional<std::string> DevFor(absl::string_view email) const;
  size_t size() const { return dev_by_email_.size(); }

 private:
  std::map<std::string, std::string> dev_by_email_;
};

// Maps a commit to the hosting-platform account it is attributed to.
class AccountLookup {
 public:
  virtual ~AccountLookup() = default;

  // nullopt when the commit is not bound to any account. An error status
  // means the lookup itself failed.
  virtual absl::StatusOr<std::optional<std::string>> Lookup(
      absl::string_view repo_locator, absl::string_view commit_id) = 0;
};

struct AccountLookupOptions {
  std::string base_url = "https://api.github.com";
  std::string token;
  std::filesystem::path cache_file;
  int max_attempts = 4;
  absl::Duration initial_backoff = absl::Seconds(1);
  absl::Duration timeout = absl::Seconds(20);
};

// GitHub-style commit API client (`GET <base>/repos/<repo>/commits/<sha>`,
// account taken from `author.login`) with a JSON-lines disk cache of
// `{repo, commit, account|null}` records. Cached answers never hit the
// network. Safe for concurrent use.
class CachedAccountLookup : public AccountLookup {
 public:
  using Options = AccountLookupOptions;

  // Reads TF_API_URL and TF_API_TOKEN on top of `base`.
  static Options OptionsFromEnvironment(Options base = {});

  static absl::StatusOr<std::unique_ptr<CachedAccountLookup>> Open(Options options);

  absl::StatusOr<std::optional<std::string>> Lookup(
      absl::string_view repo_locator, absl::string_view commit_id) override;

  // Number of HTTP requests issued so far (retries included).
  int requests_sent() const;

 private:
  explicit CachedAccountLookup(Options options) : options_(std::move(options)) {}

  absl::StatusOr<std::optional<std::string>> Fetch(absl::string_view repo_locator,
                                                   absl::string_view commit_id);
  void Remember(const std::string& key, const std::string& repo,
                const std::string& commit, const std::optional<std::string>& account);

  Options options_;
  mutable std::mutex mu_;
  std::map<std::string, std::optional<std::string>> cache_;
  int requests_sent_ = 0;
};

struct ResolutionResult {
  RepositoryHistory history;  // commits carry canonical dev ids
  AliasReport report;
  std::vector<CanonicalDeveloper> developers;  // ordered by dev_id
  std::vector<std::string> warnings;
};

// Assigns every commit a canonical developer. Precedence: mapping file, then
// remote lookup (one lookup per raw identity, at its earliest commit), then
// the raw identity itself. Remote failures degrade to the raw identity with
// a warning. Developers holding several accounts stay separate.
absl::StatusOr<ResolutionResult> ResolveAliases(
    const RepositoryHistory& history, const AliasMapping* mapping,
    AccountLookup* remote, absl::string_view repo_locator);

}  // namespace tflife

#endif  // TFLIFELINE_IDENTITY_H_
