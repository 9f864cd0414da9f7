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

#ifndef TFLIFELINE_TRUCK_FACTOR_H_
#define TFLIFELINE_TRUCK_FACTOR_H_

#include <set>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "tflifeline/authorship.h"
#include "tflifeline/time_util.h"

namespace tflife {

struct TfSnapshot {
  Instant as_of;
  int tf = 0;
  std::set<std::string> tf_developers;
  // Coverage left after removing tf_developers; below the threshold.
  double coverage_at_stop = 0.0;
  std::vector<std::string> removal_order;
};

// Fraction of authored files (non-empty main-author set) that keep at least
// one main author outside `removed`. The denominator is always the table's
// authored-file count.
absl::StatusOr<double> Coverage(const AuthorshipTable& table,
                                const std::set<std::string>& removed);

// Greedy truck factor: remove the developer who is main author of the most
// files (ties: larger total DOA, then smaller dev_id) until coverage drops
// below `coverage_threshold`. Fails when no file has a main author.
absl::StatusOr<TfSnapshot> ComputeTruckFactor(const AuthorshipTable& table,
                                              double coverage_threshold = 0.5);

}  // namespace tflife

#endif  // TFLIFELINE_TRUCK_FACTOR_H_
