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

#ifndef TFLIFELINE_HISTORY_H_
#define TFLIFELINE_HISTORY_H_

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include "absl/strings/string_view.h"
#include <vector>

#include "absl/status/statusor.h"
#include "tflifeline/path_rules.h"
#include "tflifeline/time_util.h"

namespace tflife {

enum class ChangeKind { kAdd, kModify, kDelete, kRename };

// Single-letter wire code used by the normalized log ("A", "M", "D", "R").
char ChangeKindCode(ChangeKind kind);

struct FileChange {
  ChangeKind kind = ChangeKind::kModify;
  std::string path;
  // Present exactly when kind == kRename.
  std::optional<std::string> old_path;

  friend bool operator==(const FileChange&, const FileChange&) = default;
};

struct CommitRecord {
  std::string id;
  std::string author_name;
  std::string author_email;
  Instant timestamp;
  std::vector<FileChange> changes;
  bool is_merge = false;
  // Canonical developer. Ingestion fills in the raw identity key (see
  // RawIdentityKey); alias resolution may replace it.
  std::string dev_id;

  friend bool operator==(const CommitRecord&, const CommitRecord&) = default;
};

// Lower-cased e-mail, or the name when the e-mail is empty.
std::string RawIdentityKey(absl::string_view name, absl::string_view email);

// True for non-empty, relative paths without "." or ".." segments.
bool IsValidRepoPath(absl::string_view path);

// An immutable, non-empty commit stream ordered by (timestamp, id).
class RepositoryHistory {
 public:
  // Sorts, validates ids, paths and FileChange invariants.
  static absl::StatusOr<RepositoryHistory> Create(
      std::string repo_id, std::vector<CommitRecord> commits);

  const std::string& repo_id() const { return repo_id_; }
  const std::vector<CommitRecord>& commits() const { return commits_; }
  Instant created_at() const { return commits_.front().timestamp; }
  Instant head_at() const { return commits_.back().timestamp; }

  // Copy with every commit's dev_id replaced by `dev_of(commit)`.
  RepositoryHistory WithDevIds(
      const std::function<std::string(const CommitRecord&)>& dev_of) const;

  // Copy containing only the commits with timestamp <= as_of. Fails when
  // nothing would remain.
  absl::StatusOr<RepositoryHistory> TruncatedAt(Instant as_of) const;

 private:
  RepositoryHistory(std::string repo_id, std::vector<CommitRecord> commits)
      : repo_id_(std::move(repo_id)), commits_(std::move(commits)) {}

  std::string repo_id_;
  std::vector<CommitRecord> commits_;
};

// ---------------------------------------------------------------------------
// Ingestion.

// JSON-lines: one commit per line with fields
//   id, author_name, author_email, ts (ISO-8601 UTC), merge (bool),
//   changes: [{kind: "A"|"M"|"D"|"R", path, old_path?}]
// Errors carry the 1-based line number.
absl::StatusOr<RepositoryHistory> ParseNormalizedLog(std::istream& in,
                                                     std::string repo_id);

// Writes the normalized log form; ParseNormalizedLog reads it back.
void WriteNormalizedLog(const RepositoryHistory& history, std::ostream& out);

// Runs `git log` in `repo_dir` with rename detection and converts the output.
absl::StatusOr<RepositoryHistory> IngestGitRepository(
    const std::filesystem::path& repo_dir, std::string repo_id);

// Directory -> git repository, regular file -> normalized log.
absl::StatusOr<RepositoryHistory> IngestRepository(
    const std::filesystem::path& source, std::string repo_id = "");

// ---------------------------------------------------------------------------
// Replay.

struct FileSnapshot {
  Instant as_of;
  std::set<std::string> live_files;
};

// One file identity followed across renames. `changes` lists every change
// (including the creating one) in commit order.
struct FileLineage {
  struct Touch {
    std::string dev_id;
    ChangeKind kind;
  };
  std::string path;     // current path at the replay instant
  std::string creator;  // dev_id of the commit that added the file
  std::vector<Touch> changes;
};

// Replays every change with timestamp <= as_of and returns the lineages of
// the files that are live at as_of, ordered by path.
//
// Lenient replay rules: an Add of a live path or a Modify of it counts as a
// modification; a Modify or Rename of a path that is not live creates the
// file (the committer becomes its creator); a Delete of a non-live path is
// ignored; a Rename onto a live path replaces that file.
std::vector<FileLineage> ReplayLineages(const RepositoryHistory& history,
                                        Instant as_of);

absl::StatusOr<FileSnapshot> SnapshotFiles(const RepositoryHistory& history,
                                           Instant as_of);

FileSnapshot SelectSourceFiles(const FileSnapshot& snapshot,
                               const PathRules& rules);

// ---------------------------------------------------------------------------
// Dataset-quality filters. Both return true when the project is EXCLUDED.

struct MigrationFilterOptions {
  // Prefixes of fewer than `window_commits` commits are examined.
  int window_commits = 20;
  double max_fraction = 0.5;
};

// True when some prefix of fewer than 20 commits adds more than half of all
// files ever added over the history, a sign of history lost in a migration.
bool IsCorruptedMigration(const RepositoryHistory& history,
                          const MigrationFilterOptions& options = {});

// True when head_at - created_at < minimum (a span of exactly `minimum` is
// kept).
bool IsTooShort(const RepositoryHistory& history, absl::Duration minimum);

}  // namespace tflife

#endif  // TFLIFELINE_HISTORY_H_
