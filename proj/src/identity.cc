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

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>
#include <utility>

#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "httplib.h"
#include "json.hpp"

namespace tflife {
namespace {

using nlohmann::json;

std::string CacheKey(absl::string_view repo, absl::string_view commit) {
  return absl::StrCat(repo, "\n", commit);
}

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string prefix;  // path prefix without trailing '/'
};

SplitUrl SplitBaseUrl(absl::string_view url) {
  SplitUrl out;
  const size_t scheme = url.find("://");
  const size_t path =
      url.find('/', scheme == absl::string_view::npos ? 0 : scheme + 3);
  if (path == absl::string_view::npos) {
    out.origin = std::string(url);
  } else {
    out.origin = std::string(url.substr(0, path));
    out.prefix = std::string(url.substr(path));
    while (!out.prefix.empty() && out.prefix.back() == '/') out.prefix.pop_back();
  }
  return out;
}

}  // namespace

absl::string_view ResolutionSourceName(ResolutionSource source) {
  switch (source) {
    case ResolutionSource::kMappingFile:
      return "mapping_file";
    case ResolutionSource::kRemoteLookup:
      return "remote_lookup";
    case ResolutionSource::kUntouched:
      return "untouched";
  }
  return "unknown";
}

absl::StatusOr<AliasMapping> AliasMapping::Parse(absl::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    return absl::InvalidArgumentError(absl::StrCat("mapping file: ", e.what()));
  }
  if (!j.is_object()) {
    return absl::InvalidArgumentError("mapping file: expected a JSON object");
  }
  AliasMapping m;
  for (const auto& [dev, emails] : j.items()) {
    if (dev.empty() || !emails.is_array()) {
      return absl::InvalidArgumentError(
          absl::StrCat("mapping file: entry '", dev, "' must be a list of e-mails"));
    }
    for (const json& e : emails) {
      if (!e.is_string()) {
        return absl::InvalidArgumentError(
            absl::StrCat("mapping file: non-string e-mail under '", dev, "'"));
      }
      const std::string key = absl::AsciiStrToLower(
          absl::StripAsciiWhitespace(e.get<std::string>()));
      auto [it, inserted] = m.dev_by_email_.emplace(key, dev);
      if (!inserted && it->second != dev) {
        return absl::InvalidArgumentError(absl::StrCat(
            "mapping file: '", key, "' claimed by both '", it->second, "' and '",
            dev, "'"));
      }
    }
  }
  return m;
}

absl::StatusOr<AliasMapping> AliasMapping::Load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) {
    return absl::NotFoundError(absl::StrCat("cannot read mapping file ", file.string()));
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return Parse(buf.str());
}

std::optional<std::string> AliasMapping::DevFor(absl::string_view email) const {
  auto it = dev_by_email_.find(absl::AsciiStrToLower(absl::StripAsciiWhitespace(email)));
  if (it == dev_by_email_.end()) return std::nullopt;
  return it->second;
}

CachedAccountLookup::Options CachedAccountLookup::OptionsFromEnvironment(Options base) {
  if (const char* url = std::getenv("TF_API_URL"); url && *url) base.base_url = url;
  if (const char* tok = std::getenv("TF_API_TOKEN"); tok && *tok) base.token = tok;
  return base;
}

absl::StatusOr<std::unique_ptr<CachedAccountLookup>> CachedAccountLookup::Open(
    Options options) {
  std::unique_ptr<CachedAccountLookup> client(new CachedAccountLookup(std::move(options)));
  const std::filesystem::path& file = client->options_.cache_file;
  if (file.empty()) return client;
  std::ifstream in(file);
  if (!in) return client;  // no cache yet
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (absl::StripAsciiWhitespace(line).empty()) continue;
    try {
      json j = json::parse(line);
      std::optional<std::string> account;
      if (!j.at("account").is_null()) account = j.at("account").get<std::string>();
      client->cache_[CacheKey(j.at("repo").get<std::string>(),
                              j.at("commit").get<std::string>())] = account;
    } catch (const json::exception& e) {
      return absl::InvalidArgumentError(absl::StrCat(
          "lookup cache ", file.string(), " line ", line_no, ": ", e.what()));
    }
  }
  return client;
}

int CachedAccountLookup::requests_sent() const {
  std::lock_guard<std::mutex> lock(mu_);
  return requests_sent_;
}

void CachedAccountLookup::Remember(const std::string& key, const std::string& repo,
                                   const std::string& commit,
                                   const std::optional<std::string>& account) {
  std::lock_guard<std::mutex> lock(mu_);
  if (!cache_.emplace(key, account).second) return;
  if (options_.cache_file.empty()) return;
  std::ofstream out(options_.cache_file, std::ios::app);
  json j = {{"repo", repo}, {"commit", commit}, {"account", nullptr}};
  if (account) j["account"] = *account;
  out << j.dump() << '\n';
}

absl::StatusOr<std::optional<std::string>> CachedAccountLookup::Lookup(
    absl::string_view repo_locator, absl::string_view commit_id) {
  const std::string key = CacheKey(repo_locator, commit_id);
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  absl::StatusOr<std::optional<std::string>> fetched = Fetch(repo_locator, commit_id);
  if (!fetched.ok()) return fetched.status();
  Remember(key, std::string(repo_locator), std::string(commit_id), *fetched);
  return *fetched;
}

absl::StatusOr<std::optional<std::string>> CachedAccountLookup::Fetch(
    absl::string_view repo_locator, absl::string_view commit_id) {
  const SplitUrl url = SplitBaseUrl(options_.base_url);
  httplib::Client client(url.origin);
  const int64_t timeout_s = absl::ToInt64Seconds(options_.timeout);
  client.set_connection_timeout(timeout_s, 0);
  client.set_read_timeout(timeout_s, 0);
  httplib::Headers headers = {{"Accept", "application/vnd.github+json"},
                              {"User-Agent", "tf-lifeline"}};
  if (!options_.token.empty()) {
    headers.emplace("Authorization", absl::StrCat("token ", options_.token));
  }
  const std::string path =
      absl::StrCat(url.prefix, "/repos/", repo_locator, "/commits/", commit_id);

  absl::Duration backoff = options_.initial_backoff;
  std::string last_error = "no attempt made";
  for (int attempt = 1; attempt <= options_.max_attempts; ++attempt) {
    {
      std::lock_guard<std::mutex> lock(mu_);
      ++requests_sent_;
    }
    httplib::Result res = client.Get(path, headers);
    bool retry = false;
    if (!res) {
      last_error = absl::StrCat("transport error: ", httplib::to_string(res.error()));
      retry = true;
    } else if (res->status == 200) {
      try {
        json j = json::parse(res->body);
        const json& author = j.contains("author") ? j.at("author") : json();
        if (author.is_object() && author.contains("login") &&
            author.at("login").is_string()) {
          return std::optional<std::string>(author.at("login").get<std::string>());
        }
        return std::optional<std::string>();
      } catch (const json::exception& e) {
        return absl::DataLossError(absl::StrCat("bad lookup response: ", e.what()));
      }
    } else if (res->status == 404 || res->status == 422) {
      return std::optional<std::string>();
    } else if (res->status == 429 ||
               (res->status == 403 &&
                res->get_header_value("X-RateLimit-Remaining") == "0") ||
               res->status >= 500) {
      last_error = absl::StrCat("HTTP ", res->status);
      retry = true;
    } else {
      return absl::UnavailableError(absl::StrCat("lookup of ", commit_id, " failed: HTTP ",
                                                 res->status));
    }
    if (retry && attempt < options_.max_attempts) {
      std::this_thread::sleep_for(absl::ToChronoMilliseconds(backoff));
      backoff *= 2;
    }
  }
  return absl::UnavailableError(absl::StrCat("lookup of ", commit_id, " gave up after ",
                                             options_.max_attempts,
                                             " attempts: ", last_error));
}

absl::StatusOr<ResolutionResult> ResolveAliases(const RepositoryHistory& history,
                                                const AliasMapping* mapping,
                                                AccountLookup* remote,
                                                absl::string_view repo_locator) {
  struct Seen {
    RawIdentity identity;
    const CommitRecord* earliest;
  };
  std::map<std::string, Seen> raw;  // key -> first occurrence
  for (const CommitRecord& c : history.commits()) {
    const std::string key = RawIdentityKey(c.author_name, c.author_email);
    raw.try_emplace(key, Seen{{c.author_name, c.author_email}, &c});
  }

  std::vector<std::string> warnings;
  std::map<std::string, std::pair<std::string, ResolutionSource>> dev_of;
  for (const auto& [key, seen] : raw) {
    if (mapping != nullptr && !seen.identity.email.empty()) {
      if (std::optional<std::string> dev = mapping->DevFor(seen.identity.email)) {
        dev_of[key] = {*dev, ResolutionSource::kMappingFile};
        continue;
      }
    }
    if (remote != nullptr && !repo_locator.empty()) {
      absl::StatusOr<std::optional<std::string>> account =
          remote->Lookup(repo_locator, seen.earliest->id);
      if (!account.ok()) {
        warnings.push_back(absl::StrCat("remote lookup for '", key, "' failed (",
                                        account.status().message(),
                                        "); keeping the raw identity"));
      } else if (account->has_value()) {
        dev_of[key] = {**account, ResolutionSource::kRemoteLookup};
        continue;
      }
    }
    dev_of[key] = {key, ResolutionSource::kUntouched};
  }

  std::map<std::string, CanonicalDeveloper> devs;
  for (const auto& [key, seen] : raw) {
    const auto& [dev_id, source] = dev_of.at(key);
    CanonicalDeveloper& d = devs[dev_id];
    if (d.aliases.empty()) {
      d.dev_id = dev_id;
      d.source = source;
    } else if (source != d.source) {
      // Mixed sources: report the strongest one.
      d.source = std::min(d.source, source);
    }
    d.aliases.push_back(seen.identity);
  }

  // Every raw identity lands in exactly one developer.
  std::set<std::string> claimed;
  for (const auto& [id, d] : devs) {
    for (const RawIdentity& r : d.aliases) {
      if (!claimed.insert(r.Key()).second) {
        return absl::InternalError(
            absl::StrCat("identity '", r.Key(), "' assigned to two developers"));
      }
    }
  }

  ResolutionResult result{
      history.WithDevIds([&](const CommitRecord& c) {
        return dev_of.at(RawIdentityKey(c.author_name, c.author_email)).first;
      }),
      AliasReport{history.repo_id(), static_cast<int>(raw.size()),
                  static_cast<int>(devs.size()), 0.0},
      {},
      std::move(warnings)};
  result.report.alias_percentage =
      1.0 - static_cast<double>(devs.size()) / static_cast<double>(raw.size());
  for (auto& [id, d] : devs) result.developers.push_back(std::move(d));
  return result;
}

}  // namespace tflife
