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

#ifndef TFLIFELINE_TIME_UTIL_H_
#define TFLIFELINE_TIME_UTIL_H_

#include <string>
#include "absl/strings/string_view.h"

#include "absl/status/statusor.h"
#include "absl/time/time.h"

namespace tflife {

// All instants are UTC with second resolution.
using Instant = absl::Time;

// Calendar conventions used for every duration literal in the tool:
// one month is 30.44 days and one year is 365.25 days.
absl::Duration Days(double n);
absl::Duration Months(double n);
absl::Duration Years(double n);

// Accepts "2015-12-10T14:03:00Z", "2015-12-10T14:03:00+01:00" and the
// date-only form "2015-12-10" (midnight UTC).
absl::StatusOr<Instant> ParseInstant(absl::string_view text);

// "YYYY-MM-DDTHH:MM:SSZ".
std::string FormatInstant(Instant t);

// Parses "<number><unit>" where unit is one of s, h, d, w, m (month), y.
// Examples: "90d", "6m", "1.5y".
absl::StatusOr<absl::Duration> ParseDurationSpec(absl::string_view text);

// Inverse of ParseDurationSpec for the common units; falls back to days.
std::string FormatDurationSpec(absl::Duration d);

// Adds whole calendar months in UTC, clamping the day (Jan 31 + 1 month is
// Feb 28/29).
Instant AddCalendarMonths(Instant t, int months);

}  // namespace tflife

#endif  // TFLIFELINE_TIME_UTIL_H_
