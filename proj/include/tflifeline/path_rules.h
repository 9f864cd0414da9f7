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

#ifndef TFLIFELINE_PATH_RULES_H_
#define TFLIFELINE_PATH_RULES_H_

#include <filesystem>
#include <string>
#include "absl/strings/string_view.h"
#include <vector>

#include "absl/status/statusor.h"

namespace tflife {

// Glob matching over '/'-separated repository paths.
//   *   any run of characters except '/'
//   ?   one character except '/'
//   **  any run of characters including '/' (a whole segment, or a suffix
//       like "vendor/**")
// A pattern without '/' is matched against the basename, so "*.rb" selects
// Ruby files at any depth.
bool GlobMatch(absl::string_view pattern, absl::string_view path);

// Ordered include/exclude rule set. A path is selected when it matches some
// include pattern (or there are no include patterns) and no exclude pattern.
class PathRules {
 public:
  enum class Action { kInclude, kExclude };
  struct Rule {
    Action action;
    std::string glob;
  };

  PathRules() = default;

  // One "include:<glob>" or "exclude:<glob>" per line. Blank lines and lines
  // starting with '#' are ignored.
  static absl::StatusOr<PathRules> Parse(absl::string_view text);
  static absl::StatusOr<PathRules> Load(const std::filesystem::path& file);

  absl::Status Add(Action action, std::string glob);

  bool Selects(absl::string_view path) const;
  bool empty() const { return rules_.empty(); }
  const std::vector<Rule>& rules() const { return rules_; }

 private:
  std::vector<Rule> rules_;
};

}  // namespace tflife

#endif  // TFLIFELINE_PATH_RULES_H_
