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

#include "tflifeline/time_util.h"

#include <cmath>
#include <cstdlib>
#include <string>

#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/time/civil_time.h"

namespace tflife {
namespace {

constexpr double kDaysPerMonth = 30.44;
constexpr double kDaysPerYear = 365.25;

bool NearInteger(double v) { return std::fabs(v - std::round(v)) < 1e-9; }

std::string TrimNumber(double v) {
  std::string s = absl::StrFormat("%.6g", v);
  return s;
}

}  // namespace

absl::Duration Days(double n) { return absl::Seconds(std::llround(n * 86400.0)); }
absl::Duration Months(double n) { return Days(n * kDaysPerMonth); }
absl::Duration Years(double n) { return Days(n * kDaysPerYear); }

absl::StatusOr<Instant> ParseInstant(absl::string_view text) {
  std::string s(absl::StripAsciiWhitespace(text));
  absl::Time t;
  std::string err;
  if (absl::ParseTime(absl::RFC3339_full, s, &t, &err)) {
    return absl::FromUnixSeconds(absl::ToUnixSeconds(t));
  }
  if (absl::ParseTime("%Y-%m-%d", s, absl::UTCTimeZone(), &t, &err)) {
    return t;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("not an ISO-8601 instant: '", s, "'"));
}

std::string FormatInstant(Instant t) {
  return absl::FormatTime("%Y-%m-%dT%H:%M:%SZ", t, absl::UTCTimeZone());
}

absl::StatusOr<absl::Duration> ParseDurationSpec(absl::string_view text) {
  std::string s(absl::StripAsciiWhitespace(text));
  if (s.size() < 2) {
    return absl::InvalidArgumentError(absl::StrCat("bad duration '", s, "'"));
  }
  const char unit = absl::ascii_tolower(s.back());
  double value = 0;
  if (!absl::SimpleAtod(s.substr(0, s.size() - 1), &value) ||
      !std::isfinite(value) || value < 0) {
    return absl::InvalidArgumentError(absl::StrCat("bad duration '", s, "'"));
  }
  switch (unit) {
    case 's':
      return absl::Seconds(std::llround(value));
    case 'h':
      return absl::Seconds(std::llround(value * 3600.0));
    case 'd':
      return Days(value);
    case 'w':
      return Days(7 * value);
    case 'm':
      return Months(value);
    case 'y':
      return Years(value);
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown duration unit in '", s, "' (use s/h/d/w/m/y)"));
}

std::string FormatDurationSpec(absl::Duration d) {
  const double days = absl::ToDoubleSeconds(d) / 86400.0;
  const double years = days / kDaysPerYear;
  const double months = days / kDaysPerMonth;
  if (days > 0 && NearInteger(years * 4)) return TrimNumber(years) + "y";
  if (days > 0 && NearInteger(months)) return TrimNumber(months) + "m";
  return TrimNumber(days) + "d";
}

Instant AddCalendarMonths(Instant t, int months) {
  const absl::TimeZone utc = absl::UTCTimeZone();
  const absl::CivilSecond cs = absl::ToCivilSecond(t, utc);
  const absl::CivilMonth target =
      absl::CivilMonth(cs.year(), cs.month()) + months;
  const int last_day = (absl::CivilDay(target + 1) - 1).day();
  const int day = std::min(cs.day(), last_day);
  return absl::FromCivil(absl::CivilSecond(target.year(), target.month(), day,
                                           cs.hour(), cs.minute(), cs.second()),
                         utc);
}

}  // namespace tflife
