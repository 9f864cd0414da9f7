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

#include "tflifeline/history.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <memory>
#include <ostream>
#include <string>
#include <utility>

#include "absl/container/flat_hash_set.h"
#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "json.hpp"

namespace tflife {
namespace {

using nlohmann::json;

absl::StatusOr<ChangeKind> KindFromCode(absl::string_view code) {
  if (code == "A") return ChangeKind::kAdd;
  if (code == "M") return ChangeKind::kModify;
  if (code == "D") return ChangeKind::kDelete;
  if (code == "R") return ChangeKind::kRename;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown change kind '", code, "'"));
}

absl::Status ValidateChange(const FileChange& c) {
  if (!IsValidRepoPath(c.path)) {
    return absl::InvalidArgumentError(absl::StrCat("invalid path '", c.path, "'"));
  }
  const bool is_rename = c.kind == ChangeKind::kRename;
  if (is_rename != c.old_path.has_value()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "old_path must be present exactly for renames (path '", c.path, "')"));
  }
  if (is_rename && !IsValidRepoPath(*c.old_path)) {
    return absl::InvalidArgumentError(
        absl::StrCat("invalid old_path '", *c.old_path, "'"));
  }
  return absl::OkStatus();
}

absl::Status LineError(int line_no, absl::string_view what) {
  return absl::InvalidArgumentError(absl::StrCat("line ", line_no, ": ", what));
}

absl::StatusOr<CommitRecord> ParseLogLine(const std::string& line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    return absl::InvalidArgumentError(absl::StrCat("malformed JSON (", e.what(), ")"));
  }
  if (!j.is_object()) return absl::InvalidArgumentError("expected a JSON object");
  CommitRecord c;
  try {
    c.id = j.at("id").get<std::string>();
    c.author_name = j.value("author_name", std::string());
    c.author_email = j.value("author_email", std::string());
    c.is_merge = j.value("merge", false);
    absl::StatusOr<Instant> ts = ParseInstant(j.at("ts").get<std::string>());
    if (!ts.ok()) return ts.status();
    c.timestamp = *ts;
    for (const json& jc : j.value("changes", json::array())) {
      FileChange fc;
      absl::StatusOr<ChangeKind> kind = KindFromCode(jc.at("kind").get<std::string>());
      if (!kind.ok()) return kind.status();
      fc.kind = *kind;
      fc.path = jc.at("path").get<std::string>();
      if (jc.contains("old_path") && !jc.at("old_path").is_null()) {
        fc.old_path = jc.at("old_path").get<std::string>();
      }
      c.changes.push_back(std::move(fc));
    }
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("bad field (", e.what(), ")"));
  }
  if (c.id.empty()) return absl::InvalidArgumentError("empty commit id");
  if (c.author_name.empty() && c.author_email.empty()) {
    return absl::InvalidArgumentError("commit has no author identity");
  }
  for (const FileChange& fc : c.changes) {
    if (absl::Status s = ValidateChange(fc); !s.ok()) return s;
  }
  c.dev_id = RawIdentityKey(c.author_name, c.author_email);
  return c;
}

std::string ShellQuote(absl::string_view s) {
  std::string out = "'";
  for (char ch : s) {
    if (ch == '\'') {
      out += "'\\''";
    } else {
      out += ch;
    }
  }
  out += "'";
  return out;
}

absl::StatusOr<std::string> RunCommand(const std::string& cmd) {
  std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(cmd.c_str(), "r"), pclose);
  if (!pipe) return absl::InternalError(absl::StrCat("cannot run: ", cmd));
  std::string out;
  char buf[1 << 15];
  size_t n;
  while ((n = fread(buf, 1, sizeof(buf), pipe.get())) > 0) out.append(buf, n);
  const int rc = pclose(pipe.release());
  if (rc != 0) {
    return absl::FailedPreconditionError(
        absl::StrCat("command failed (status ", rc, "): ", cmd));
  }
  return out;
}

// One name-status line of `git log --name-status -M --cc`.
absl::StatusOr<std::optional<FileChange>> ParseNameStatus(absl::string_view line) {
  std::vector<absl::string_view> f = absl::StrSplit(line, '\t');
  if (f.size() < 2 || f[0].empty()) {
    return absl::InvalidArgumentError(absl::StrCat("bad name-status line '", line, "'"));
  }
  const absl::string_view status = f[0];
  FileChange c;
  switch (status.front()) {
    case 'R':
    case 'C':
      if (f.size() != 3) {
        return absl::InvalidArgumentError(absl::StrCat("bad rename line '", line, "'"));
      }
      if (status.front() == 'R') {
        c.kind = ChangeKind::kRename;
        c.old_path = std::string(f[1]);
      } else {
        c.kind = ChangeKind::kAdd;
      }
      c.path = std::string(f[2]);
      return c;
    default:
      break;
  }
  c.path = std::string(f[1]);
  // Combined merge output has one status letter per parent.
  const bool all_add = status.find_first_not_of('A') == absl::string_view::npos;
  const bool all_delete = status.find_first_not_of('D') == absl::string_view::npos;
  if (all_add) {
    c.kind = ChangeKind::kAdd;
  } else if (all_delete) {
    c.kind = ChangeKind::kDelete;
  } else if (status.find_first_not_of("AMDTU") == absl::string_view::npos) {
    c.kind = ChangeKind::kModify;
  } else {
    return std::optional<FileChange>();  // unknown/unmerged entries are skipped
  }
  return c;
}

}  // namespace

char ChangeKindCode(ChangeKind kind) {
  switch (kind) {
    case ChangeKind::kAdd:
      return 'A';
    case ChangeKind::kModify:
      return 'M';
    case ChangeKind::kDelete:
      return 'D';
    case ChangeKind::kRename:
      return 'R';
  }
  return '?';
}

std::string RawIdentityKey(absl::string_view name, absl::string_view email) {
  std::string e = absl::AsciiStrToLower(absl::StripAsciiWhitespace(email));
  if (!e.empty()) return e;
  return std::string(absl::StripAsciiWhitespace(name));
}

bool IsValidRepoPath(absl::string_view path) {
  if (path.empty() || path.front() == '/') return false;
  for (absl::string_view seg : absl::StrSplit(path, '/')) {
    if (seg.empty() || seg == "." || seg == "..") return false;
  }
  return true;
}

absl::StatusOr<RepositoryHistory> RepositoryHistory::Create(
    std::string repo_id, std::vector<CommitRecord> commits) {
  if (commits.empty()) {
    return absl::InvalidArgumentError(
        absl::StrCat("history of '", repo_id, "' is empty"));
  }
  absl::flat_hash_set<std::string> ids;
  for (CommitRecord& c : commits) {
    if (!ids.insert(c.id).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("duplicate commit id '", c.id, "'"));
    }
    for (const FileChange& fc : c.changes) {
      if (absl::Status s = ValidateChange(fc); !s.ok()) {
        return absl::InvalidArgumentError(
            absl::StrCat("commit ", c.id, ": ", s.message()));
      }
    }
    if (c.dev_id.empty()) c.dev_id = RawIdentityKey(c.author_name, c.author_email);
    c.timestamp = absl::FromUnixSeconds(absl::ToUnixSeconds(c.timestamp));
  }
  std::stable_sort(commits.begin(), commits.end(),
                   [](const CommitRecord& a, const CommitRecord& b) {
                     if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
                     return a.id < b.id;
                   });
  return RepositoryHistory(std::move(repo_id), std::move(commits));
}

RepositoryHistory RepositoryHistory::WithDevIds(
    const std::function<std::string(const CommitRecord&)>& dev_of) const {
  std::vector<CommitRecord> out = commits_;
  for (CommitRecord& c : out) c.dev_id = dev_of(c);
  return RepositoryHistory(repo_id_, std::move(out));
}

absl::StatusOr<RepositoryHistory> RepositoryHistory::TruncatedAt(Instant as_of) const {
  std::vector<CommitRecord> out;
  for (const CommitRecord& c : commits_) {
    if (c.timestamp > as_of) break;
    out.push_back(c);
  }
  if (out.empty()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "no commits at or before ", FormatInstant(as_of), " in '", repo_id_, "'"));
  }
  return RepositoryHistory(repo_id_, std::move(out));
}

absl::StatusOr<RepositoryHistory> ParseNormalizedLog(std::istream& in,
                                                     std::string repo_id) {
  std::vector<CommitRecord> commits;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (absl::StripAsciiWhitespace(line).empty()) continue;
    absl::StatusOr<CommitRecord> c = ParseLogLine(line);
    if (!c.ok()) return LineError(line_no, c.status().message());
    commits.push_back(*std::move(c));
  }
  if (in.bad()) return absl::DataLossError("read error in normalized log");
  return RepositoryHistory::Create(std::move(repo_id), std::move(commits));
}

void WriteNormalizedLog(const RepositoryHistory& history, std::ostream& out) {
  for (const CommitRecord& c : history.commits()) {
    json changes = json::array();
    for (const FileChange& fc : c.changes) {
      json jc = {{"kind", std::string(1, ChangeKindCode(fc.kind))}, {"path", fc.path}};
      if (fc.old_path) jc["old_path"] = *fc.old_path;
      changes.push_back(std::move(jc));
    }
    json j = {{"id", c.id},
              {"author_name", c.author_name},
              {"author_email", c.author_email},
              {"ts", FormatInstant(c.timestamp)},
              {"merge", c.is_merge},
              {"changes", std::move(changes)}};
    out << j.dump() << '\n';
  }
}

absl::StatusOr<RepositoryHistory> IngestGitRepository(
    const std::filesystem::path& repo_dir, std::string repo_id) {
  const std::string cmd = absl::StrCat(
      "git -c core.quotePath=false -C ", ShellQuote(repo_dir.string()),
      " log --no-color --format='%x1e%H%x1f%an%x1f%ae%x1f%at%x1f%P'"
      " --name-status -M --cc 2>/dev/null");
  absl::StatusOr<std::string> out = RunCommand(cmd);
  if (!out.ok()) return out.status();

  std::vector<CommitRecord> commits;
  for (absl::string_view record : absl::StrSplit(*out, '\x1e', absl::SkipEmpty())) {
    std::vector<absl::string_view> lines = absl::StrSplit(record, '\n');
    std::vector<absl::string_view> head = absl::StrSplit(lines[0], '\x1f');
    if (head.size() != 5) {
      return absl::InvalidArgumentError(
          absl::StrCat("unexpected git log header '", lines[0], "'"));
    }
    CommitRecord c;
    c.id = std::string(head[0]);
    c.author_name = std::string(head[1]);
    c.author_email = std::string(head[2]);
    int64_t secs = 0;
    if (!absl::SimpleAtoi(head[3], &secs)) {
      return absl::InvalidArgumentError(absl::StrCat("bad timestamp in ", c.id));
    }
    c.timestamp = absl::FromUnixSeconds(secs);
    std::vector<absl::string_view> parents =
        absl::StrSplit(head[4], ' ', absl::SkipEmpty());
    c.is_merge = parents.size() > 1;
    for (size_t i = 1; i < lines.size(); ++i) {
      if (lines[i].empty()) continue;
      absl::StatusOr<std::optional<FileChange>> fc = ParseNameStatus(lines[i]);
      if (!fc.ok()) return fc.status();
      if (*fc && IsValidRepoPath((*fc)->path)) c.changes.push_back(**fc);
    }
    c.dev_id = RawIdentityKey(c.author_name, c.author_email);
    commits.push_back(std::move(c));
  }
  if (repo_id.empty()) repo_id = repo_dir.filename().string();
  return RepositoryHistory::Create(std::move(repo_id), std::move(commits));
}

absl::StatusOr<RepositoryHistory> IngestRepository(
    const std::filesystem::path& source, std::string repo_id) {
  std::error_code ec;
  if (repo_id.empty()) repo_id = source.stem().string();
  if (std::filesystem::is_directory(source, ec)) {
    return IngestGitRepository(source, std::move(repo_id));
  }
  std::ifstream in(source);
  if (!in) {
    return absl::NotFoundError(absl::StrCat("cannot read ", source.string()));
  }
  return ParseNormalizedLog(in, std::move(repo_id));
}

std::vector<FileLineage> ReplayLineages(const RepositoryHistory& history,
                                        Instant as_of) {
  std::vector<FileLineage> all;
  std::map<std::string, size_t> live;

  auto create = [&](const std::string& path, const std::string& dev) {
    all.push_back({path, dev, {{dev, ChangeKind::kAdd}}});
    live[path] = all.size() - 1;
  };

  for (const CommitRecord& c : history.commits()) {
    if (c.timestamp > as_of) break;
    for (const FileChange& fc : c.changes) {
      switch (fc.kind) {
        case ChangeKind::kAdd:
        case ChangeKind::kModify: {
          auto it = live.find(fc.path);
          if (it == live.end()) {
            create(fc.path, c.dev_id);
          } else {
            all[it->second].changes.push_back({c.dev_id, ChangeKind::kModify});
          }
          break;
        }
        case ChangeKind::kDelete:
          live.erase(fc.path);
          break;
        case ChangeKind::kRename: {
          auto it = live.find(*fc.old_path);
          if (it == live.end()) {
            auto target = live.find(fc.path);
            if (target == live.end()) {
              create(fc.path, c.dev_id);
            } else {
              all[target->second].changes.push_back({c.dev_id, ChangeKind::kModify});
            }
            break;
          }
          const size_t idx = it->second;
          live.erase(it);
          live[fc.path] = idx;
          all[idx].path = fc.path;
          all[idx].changes.push_back({c.dev_id, ChangeKind::kRename});
          break;
        }
      }
    }
  }

  std::vector<FileLineage> out;
  out.reserve(live.size());
  for (const auto& [path, idx] : live) out.push_back(std::move(all[idx]));
  return out;
}

absl::StatusOr<FileSnapshot> SnapshotFiles(const RepositoryHistory& history,
                                           Instant as_of) {
  if (as_of < history.created_at()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "snapshot instant ", FormatInstant(as_of), " precedes repository creation ",
        FormatInstant(history.created_at())));
  }
  FileSnapshot snap{as_of, {}};
  for (FileLineage& f : ReplayLineages(history, as_of)) {
    snap.live_files.insert(std::move(f.path));
  }
  return snap;
}

FileSnapshot SelectSourceFiles(const FileSnapshot& snapshot, const PathRules& rules) {
  if (rules.empty()) return snapshot;
  FileSnapshot out{snapshot.as_of, {}};
  for (const std::string& p : snapshot.live_files) {
    if (rules.Selects(p)) out.live_files.insert(p);
  }
  return out;
}

bool IsCorruptedMigration(const RepositoryHistory& history,
                          const MigrationFilterOptions& options) {
  const auto& commits = history.commits();
  auto adds_in = [](const CommitRecord& c) {
    return std::count_if(c.changes.begin(), c.changes.end(), [](const FileChange& fc) {
      return fc.kind == ChangeKind::kAdd;
    });
  };
  int64_t total = 0;
  for (const CommitRecord& c : commits) total += adds_in(c);
  if (total == 0) return false;

  // Cumulative adds only grow with the prefix, so the longest admissible
  // prefix decides.
  const size_t window = static_cast<size_t>(std::max(options.window_commits - 1, 0));
  const size_t k = std::min(window, commits.size());
  int64_t early = 0;
  for (size_t i = 0; i < k; ++i) early += adds_in(commits[i]);
  return static_cast<double>(early) > options.max_fraction * static_cast<double>(total);
}

bool IsTooShort(const RepositoryHistory& history, absl::Duration minimum) {
  return history.head_at() - history.created_at() < minimum;
}

}  // namespace tflife
