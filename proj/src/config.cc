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

#include "tflifeline/config.h"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "tflifeline/sensitivity.h"

namespace tflife {
namespace {

std::string Unquote(absl::string_view v) {
  v = absl::StripAsciiWhitespace(v);
  if (v.size() >= 2 && ((v.front() == '"' && v.back() == '"') ||
                        (v.front() == '\'' && v.back() == '\''))) {
    v = v.substr(1, v.size() - 2);
  }
  return std::string(v);
}

// Drops a trailing "# comment" outside quotes.
absl::string_view StripComment(absl::string_view line) {
  bool in_quotes = false;
  for (size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_quotes = !in_quotes;
    if (line[i] == '#' && !in_quotes) return line.substr(0, i);
  }
  return line;
}

absl::Status ParseDouble(absl::string_view v, double* out) {
  if (!absl::SimpleAtod(v, out)) {
    return absl::InvalidArgumentError(absl::StrCat("expected a number, got '", v, "'"));
  }
  return absl::OkStatus();
}

absl::Status ParseInt(absl::string_view v, int* out) {
  if (!absl::SimpleAtoi(v, out)) {
    return absl::InvalidArgumentError(absl::StrCat("expected an integer, got '", v, "'"));
  }
  return absl::OkStatus();
}

absl::Status ParseBool(absl::string_view v, bool* out) {
  if (!absl::SimpleAtob(v, out)) {
    return absl::InvalidArgumentError(absl::StrCat("expected a boolean, got '", v, "'"));
  }
  return absl::OkStatus();
}

absl::Status ParseDur(absl::string_view v, absl::Duration* out) {
  absl::StatusOr<absl::Duration> d = ParseDurationSpec(v);
  if (!d.ok()) return d.status();
  *out = *d;
  return absl::OkStatus();
}

std::filesystem::path Resolve(const std::filesystem::path& base, absl::string_view v) {
  std::filesystem::path p{std::string(v)};
  if (p.is_relative() && !base.empty()) return base / p;
  return p;
}

}  // namespace

AnalysisConfig::AnalysisConfig() : sensitivity_grid(DefaultThresholdGrid()) {}

absl::StatusOr<std::vector<absl::Duration>> ParseGrid(absl::string_view text) {
  std::vector<absl::Duration> grid;
  if (absl::StripAsciiWhitespace(text).empty()) {
    return absl::InvalidArgumentError("empty threshold grid");
  }
  for (absl::string_view part : absl::StrSplit(text, ',')) {
    absl::StatusOr<absl::Duration> d = ParseDurationSpec(part);
    if (!d.ok()) return d.status();
    grid.push_back(*d);
  }
  if (grid.empty()) return absl::InvalidArgumentError("empty threshold grid");
  for (size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i - 1] < grid[i])) {
      return absl::InvalidArgumentError("threshold grid must be strictly ascending");
    }
  }
  return grid;
}

absl::StatusOr<AnalysisConfig> ParseConfig(absl::string_view text,
                                           const std::filesystem::path& base_dir) {
  AnalysisConfig cfg;
  DoaModel& doa = cfg.lifecycle.doa;
  using Setter = std::function<absl::Status(absl::string_view)>;
  const std::map<std::string, Setter, std::less<>> setters = {
      {"doa.base", [&](auto v) { return ParseDouble(v, &doa.base); }},
      {"doa.fa", [&](auto v) { return ParseDouble(v, &doa.fa); }},
      {"doa.dl", [&](auto v) { return ParseDouble(v, &doa.dl); }},
      {"doa.ac", [&](auto v) { return ParseDouble(v, &doa.ac); }},
      {"doa.norm_threshold", [&](auto v) { return ParseDouble(v, &doa.norm_threshold); }},
      {"doa.abs_threshold", [&](auto v) { return ParseDouble(v, &doa.abs_threshold); }},
      {"doa.drop_unauthored", [&](auto v) { return ParseBool(v, &doa.drop_unauthored); }},
      {"tf.coverage_threshold",
       [&](auto v) { return ParseDouble(v, &cfg.lifecycle.coverage_threshold); }},
      {"snapshot.cadence_months",
       [&](auto v) { return ParseInt(v, &cfg.lifecycle.cadence_months); }},
      {"abandon.threshold",
       [&](auto v) { return ParseDur(v, &cfg.lifecycle.policy.threshold); }},
      {"abandon.anchor",
       [&](absl::string_view v) -> absl::Status {
         if (v == "head") {
           cfg.lifecycle.policy.anchor = AbandonmentAnchor::kHead;
         } else if (v == "snapshot") {
           cfg.lifecycle.policy.anchor = AbandonmentAnchor::kSnapshot;
         } else {
           return absl::InvalidArgumentError("abandon.anchor must be head or snapshot");
         }
         return absl::OkStatus();
       }},
      {"filters.min_history", [&](auto v) { return ParseDur(v, &cfg.min_history); }},
      {"filters.migration_window",
       [&](auto v) { return ParseInt(v, &cfg.migration.window_commits); }},
      {"filters.migration_fraction",
       [&](auto v) { return ParseDouble(v, &cfg.migration.max_fraction); }},
      {"rules.file",
       [&](absl::string_view v) {
         cfg.rules_file = Resolve(base_dir, v);
         return absl::OkStatus();
       }},
      {"identity.mapping_file",
       [&](absl::string_view v) {
         cfg.mapping_file = Resolve(base_dir, v);
         return absl::OkStatus();
       }},
      {"identity.cache_file",
       [&](absl::string_view v) {
         cfg.cache_file = Resolve(base_dir, v);
         return absl::OkStatus();
       }},
      {"identity.offline", [&](auto v) { return ParseBool(v, &cfg.offline); }},
      {"sensitivity.grid",
       [&](absl::string_view v) -> absl::Status {
         absl::StatusOr<std::vector<absl::Duration>> g = ParseGrid(v);
         if (!g.ok()) return g.status();
         cfg.sensitivity_grid = *std::move(g);
         return absl::OkStatus();
       }},
      {"stats.exact_max_group",
       [&](auto v) { return ParseInt(v, &cfg.mann_whitney.exact_max_group); }},
      {"stats.cliff_negligible", [&](auto v) { return ParseDouble(v, &cfg.cliff.negligible); }},
      {"stats.cliff_small", [&](auto v) { return ParseDouble(v, &cfg.cliff.small); }},
      {"stats.cliff_medium", [&](auto v) { return ParseDouble(v, &cfg.cliff.medium); }},
  };

  std::string section;
  int line_no = 0;
  for (absl::string_view raw : absl::StrSplit(text, '\n')) {
    ++line_no;
    absl::string_view line = absl::StripAsciiWhitespace(StripComment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        return absl::InvalidArgumentError(
            absl::StrCat("config line ", line_no, ": unterminated section header"));
      }
      section = std::string(absl::StripAsciiWhitespace(line.substr(1, line.size() - 2)));
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == absl::string_view::npos) {
      return absl::InvalidArgumentError(
          absl::StrCat("config line ", line_no, ": expected key = value"));
    }
    std::string key(absl::StripAsciiWhitespace(line.substr(0, eq)));
    if (!section.empty()) key = absl::StrCat(section, ".", key);
    const std::string value = Unquote(line.substr(eq + 1));
    auto it = setters.find(key);
    if (it == setters.end()) {
      return absl::InvalidArgumentError(
          absl::StrCat("config line ", line_no, ": unknown key '", key, "'"));
    }
    if (absl::Status s = it->second(value); !s.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat("config line ", line_no, " (", key, "): ", s.message()));
    }
  }

  if (cfg.lifecycle.policy.threshold <= absl::ZeroDuration()) {
    return absl::InvalidArgumentError("abandon.threshold must be positive");
  }
  if (cfg.lifecycle.cadence_months <= 0) {
    return absl::InvalidArgumentError("snapshot.cadence_months must be positive");
  }
  if (!(cfg.lifecycle.coverage_threshold > 0 && cfg.lifecycle.coverage_threshold <= 1)) {
    return absl::InvalidArgumentError("tf.coverage_threshold must lie in (0, 1]");
  }
  if (cfg.migration.window_commits < 1) {
    return absl::InvalidArgumentError("filters.migration_window must be >= 1");
  }
  return cfg;
}

absl::StatusOr<AnalysisConfig> LoadConfig(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot read config ", file.string()));
  std::stringstream buf;
  buf << in.rdbuf();
  absl::StatusOr<AnalysisConfig> cfg = ParseConfig(buf.str(), file.parent_path());
  if (!cfg.ok()) return cfg;
  if (!cfg->rules_file.empty()) {
    absl::StatusOr<PathRules> rules = PathRules::Load(cfg->rules_file);
    if (!rules.ok()) return rules.status();
    cfg->lifecycle.rules = *std::move(rules);
  }
  return cfg;
}

}  // namespace tflife
