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

#include "tflifeline/truck_factor.h"

#include <algorithm>
#include <map>
#include <tuple>

#include "absl/strings/str_cat.h"

namespace tflife {

absl::StatusOr<double> Coverage(const AuthorshipTable& table,
                                const std::set<std::string>& removed) {
  int authored = 0;
  int covered = 0;
  for (const auto& [path, file] : table.files) {
    if (file.main_authors.empty()) continue;
    ++authored;
    for (const std::string& dev : file.main_authors) {
      if (!removed.contains(dev)) {
        ++covered;
        break;
      }
    }
  }
  if (authored == 0) {
    return absl::FailedPreconditionError("coverage undefined: no authored files");
  }
  return static_cast<double>(covered) / authored;
}

absl::StatusOr<TfSnapshot> ComputeTruckFactor(const AuthorshipTable& table,
                                              double coverage_threshold) {
  struct Candidate {
    std::string dev;
    int files = 0;
    double doa_sum = 0.0;
  };
  std::map<std::string, Candidate> by_dev;
  std::vector<int> remaining;  // per authored file: main authors still present
  std::map<std::string, std::vector<int>> files_of;
  for (const auto& [path, file] : table.files) {
    for (const auto& [dev, doa] : file.doa) by_dev[dev].doa_sum += doa;
    if (file.main_authors.empty()) continue;
    const int idx = static_cast<int>(remaining.size());
    remaining.push_back(static_cast<int>(file.main_authors.size()));
    for (const std::string& dev : file.main_authors) {
      ++by_dev[dev].files;
      files_of[dev].push_back(idx);
    }
  }
  const int authored = static_cast<int>(remaining.size());
  if (authored == 0) {
    return absl::FailedPreconditionError(
        "truck factor undefined: no file has a main author");
  }

  // Main-author counts do not change as others are removed, so the greedy
  // order is a single sort.
  std::vector<Candidate> order;
  for (auto& [dev, c] : by_dev) {
    if (c.files == 0) continue;
    c.dev = dev;
    order.push_back(c);
  }
  std::sort(order.begin(), order.end(), [](const Candidate& a, const Candidate& b) {
    return std::tie(b.files, b.doa_sum, a.dev) < std::tie(a.files, a.doa_sum, b.dev);
  });

  TfSnapshot snap;
  snap.as_of = table.as_of;
  int covered = authored;
  for (const Candidate& c : order) {
    snap.removal_order.push_back(c.dev);
    snap.tf_developers.insert(c.dev);
    for (int idx : files_of[c.dev]) {
      if (--remaining[idx] == 0) --covered;
    }
    const double coverage = static_cast<double>(covered) / authored;
    if (coverage < coverage_threshold) {
      snap.tf = static_cast<int>(snap.removal_order.size());
      snap.coverage_at_stop = coverage;
      return snap;
    }
  }
  // Removing every main author leaves zero coverage.
  return absl::InternalError(absl::StrCat(
      "greedy loop exhausted without reaching coverage < ", coverage_threshold));
}

}  // namespace tflife
