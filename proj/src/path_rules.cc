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

#include "tflifeline/path_rules.h"

#include <fstream>
#include <sstream>
#include <utility>

#include "absl/strings/ascii.h"
#include "absl/strings/match.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"

namespace tflife {
namespace {

// Backtracking matcher; '**' may cross '/', '*' and '?' may not.
bool MatchFrom(absl::string_view p, absl::string_view s) {
  while (!p.empty()) {
    if (absl::StartsWith(p, "**")) {
      absl::string_view rest = p.substr(2);
      // "**/" also matches zero directories.
      if (absl::StartsWith(rest, "/") && MatchFrom(rest.substr(1), s)) {
        return true;
      }
      for (size_t i = 0; i <= s.size(); ++i) {
        if (MatchFrom(rest, s.substr(i))) return true;
      }
      return false;
    }
    if (p.front() == '*') {
      absl::string_view rest = p.substr(1);
      for (size_t i = 0; i <= s.size(); ++i) {
        if (MatchFrom(rest, s.substr(i))) return true;
        if (i < s.size() && s[i] == '/') break;
      }
      return false;
    }
    if (s.empty()) return false;
    if (p.front() == '?') {
      if (s.front() == '/') return false;
    } else if (p.front() != s.front()) {
      return false;
    }
    p.remove_prefix(1);
    s.remove_prefix(1);
  }
  return s.empty();
}

absl::Status ValidateGlob(absl::string_view glob) {
  if (glob.empty()) return absl::InvalidArgumentError("empty glob");
  if (absl::StrContains(glob, "***")) {
    return absl::InvalidArgumentError(absl::StrCat("bad glob '", glob, "'"));
  }
  if (glob.front() == '/') {
    return absl::InvalidArgumentError(
        absl::StrCat("glob must be repository-relative: '", glob, "'"));
  }
  return absl::OkStatus();
}

}  // namespace

bool GlobMatch(absl::string_view pattern, absl::string_view path) {
  if (!absl::StrContains(pattern, '/')) {
    const size_t slash = path.rfind('/');
    if (slash != absl::string_view::npos) path = path.substr(slash + 1);
  }
  return MatchFrom(pattern, path);
}

absl::Status PathRules::Add(Action action, std::string glob) {
  if (absl::Status s = ValidateGlob(glob); !s.ok()) return s;
  rules_.push_back({action, std::move(glob)});
  return absl::OkStatus();
}

absl::StatusOr<PathRules> PathRules::Parse(absl::string_view text) {
  PathRules rules;
  int line_no = 0;
  for (absl::string_view raw : absl::StrSplit(text, '\n')) {
    ++line_no;
    absl::string_view line = absl::StripAsciiWhitespace(raw);
    if (line.empty() || line.front() == '#') continue;
    Action action;
    if (absl::ConsumePrefix(&line, "include:")) {
      action = Action::kInclude;
    } else if (absl::ConsumePrefix(&line, "exclude:")) {
      action = Action::kExclude;
    } else {
      return absl::InvalidArgumentError(absl::StrCat(
          "rules line ", line_no, ": expected include:<glob> or exclude:<glob>"));
    }
    if (absl::Status s = rules.Add(action, std::string(absl::StripAsciiWhitespace(line)));
        !s.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat("rules line ", line_no, ": ", s.message()));
    }
  }
  return rules;
}

absl::StatusOr<PathRules> PathRules::Load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) {
    return absl::NotFoundError(
        absl::StrCat("cannot read rules file ", file.string()));
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return Parse(buf.str());
}

bool PathRules::Selects(absl::string_view path) const {
  bool has_include = false;
  bool included = false;
  for (const Rule& r : rules_) {
    if (r.action == Action::kInclude) {
      has_include = true;
      if (!included && GlobMatch(r.glob, path)) included = true;
    } else if (GlobMatch(r.glob, path)) {
      return false;
    }
  }
  return included || !has_include;
}

}  // namespace tflife
