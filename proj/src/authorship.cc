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

#include "tflifeline/authorship.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "absl/strings/str_cat.h"

namespace tflife {

double ComputeDoa(const AuthorshipFactors& f, const DoaModel& m) {
  return m.base + m.fa * f.first_authorship + m.dl * static_cast<double>(f.deliveries) -
         m.ac * std::log1p(static_cast<double>(f.acceptances));
}

std::map<std::string, AuthorshipFactors> FactorsByDeveloper(const FileLineage& file) {
  // The creating change is accepted by others but is not a delivery.
  std::map<std::string, AuthorshipFactors> out;
  std::map<std::string, int64_t> touches;
  for (const FileLineage::Touch& t : file.changes) {
    AuthorshipFactors& f = out[t.dev_id];
    if (t.kind != ChangeKind::kAdd) ++f.deliveries;
    ++touches[t.dev_id];
  }
  const auto total = static_cast<int64_t>(file.changes.size());
  for (auto& [dev, f] : out) {
    f.first_authorship = dev == file.creator ? 1 : 0;
    f.acceptances = total - touches[dev];
  }
  return out;
}

absl::StatusOr<AuthorshipFactors> ComputeFactors(const RepositoryHistory& history,
                                                 absl::string_view dev,
                                                 absl::string_view path, Instant as_of) {
  for (const FileLineage& f : ReplayLineages(history, as_of)) {
    if (f.path != path) continue;
    const auto by_dev = FactorsByDeveloper(f);
    if (auto it = by_dev.find(std::string(dev)); it != by_dev.end()) return it->second;
    // Untouched developer: everything on the file came from others.
    return AuthorshipFactors{0, 0, static_cast<int64_t>(f.changes.size())};
  }
  return absl::NotFoundError(absl::StrCat("'", path, "' is not live at ",
                                          FormatInstant(as_of)));
}

absl::StatusOr<std::set<std::string>> MainAuthorsOf(
    const std::map<std::string, double>& doa_by_dev, const DoaModel& model) {
  if (doa_by_dev.empty()) {
    return absl::InvalidArgumentError("no DOA recorded for file");
  }
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& [dev, doa] : doa_by_dev) best = std::max(best, doa);

  std::set<std::string> out;
  const bool absolute_gate = best >= model.abs_threshold || model.drop_unauthored;
  if (best <= 0) return out;
  for (const auto& [dev, doa] : doa_by_dev) {
    if (doa / best < model.norm_threshold) continue;
    if (absolute_gate && doa < model.abs_threshold) continue;
    out.insert(dev);
  }
  return out;
}

int AuthorshipTable::AuthoredFileCount() const {
  return static_cast<int>(std::count_if(files.begin(), files.end(), [](const auto& kv) {
    return !kv.second.main_authors.empty();
  }));
}

absl::StatusOr<AuthorshipTable> BuildAuthorshipTable(const RepositoryHistory& history,
                                                     Instant as_of,
                                                     const PathRules& rules,
                                                     const DoaModel& model) {
  if (as_of < history.created_at()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "table instant ", FormatInstant(as_of), " precedes repository creation"));
  }
  AuthorshipTable table{as_of, {}};
  for (const FileLineage& f : ReplayLineages(history, as_of)) {
    if (!rules.Selects(f.path)) continue;
    FileAuthorship fa;
    for (const auto& [dev, factors] : FactorsByDeveloper(f)) {
      fa.doa.emplace(dev, ComputeDoa(factors, model));
    }
    absl::StatusOr<std::set<std::string>> mains = MainAuthorsOf(fa.doa, model);
    if (!mains.ok()) return mains.status();
    fa.main_authors = *std::move(mains);
    table.files.emplace(f.path, std::move(fa));
  }
  return table;
}

}  // namespace tflife
