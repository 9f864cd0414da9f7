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

#ifndef TFLIFELINE_AUTHORSHIP_H_
#define TFLIFELINE_AUTHORSHIP_H_

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include "absl/strings/string_view.h"

#include "absl/status/statusor.h"
#include "tflifeline/history.h"
#include "tflifeline/path_rules.h"
#include "tflifeline/time_util.h"

namespace tflife {

// Degree-of-authorship model:
//   DOA = base + fa * FA + dl * DL - ac * ln(1 + AC)
// plus the two gates that decide who counts as a main author of a file.
struct DoaModel {
  double base = 3.293;
  double fa = 1.098;
  double dl = 0.164;
  double ac = 0.321;
  // A developer is a main author when DOA / max DOA >= norm_threshold and
  // DOA >= abs_threshold.
  double norm_threshold = 0.75;
  double abs_threshold = 3.293;
  // When true, a file whose best DOA misses abs_threshold has no main author
  // and drops out of the coverage denominator. When false, only the
  // normalized gate applies to such files.
  bool drop_unauthored = true;
};

struct AuthorshipFactors {
  int first_authorship = 0;  // 1 when the developer created the file
  int64_t deliveries = 0;    // developer's own modifications and renames
  int64_t acceptances = 0;   // every change by other developers

  friend bool operator==(const AuthorshipFactors&, const AuthorshipFactors&) = default;
};

double ComputeDoa(const AuthorshipFactors& factors, const DoaModel& model = {});

// Factors for `dev` on the file live at `path` at `as_of`, following the
// file's rename lineage.
absl::StatusOr<AuthorshipFactors> ComputeFactors(const RepositoryHistory& history,
                                                 absl::string_view dev,
                                                 absl::string_view path, Instant as_of);

// Factors for every developer who touched the lineage.
std::map<std::string, AuthorshipFactors> FactorsByDeveloper(const FileLineage& file);

// Applies the main-author gates to the DOA values recorded for one file.
absl::StatusOr<std::set<std::string>> MainAuthorsOf(
    const std::map<std::string, double>& doa_by_dev, const DoaModel& model = {});

struct FileAuthorship {
  std::map<std::string, double> doa;  // dev_id -> DOA
  std::set<std::string> main_authors;
};

struct AuthorshipTable {
  Instant as_of;
  std::map<std::string, FileAuthorship> files;  // live, selected paths

  // Files with at least one main author.
  int AuthoredFileCount() const;
};

// Live files at `as_of`, restricted by `rules`, with per-developer DOA and
// main-author sets.
absl::StatusOr<AuthorshipTable> BuildAuthorshipTable(const RepositoryHistory& history,
                                                     Instant as_of,
                                                     const PathRules& rules = {},
                                                     const DoaModel& model = {});

}  // namespace tflife

#endif  // TFLIFELINE_AUTHORSHIP_H_
