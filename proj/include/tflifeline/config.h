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

#ifndef TFLIFELINE_CONFIG_H_
#define TFLIFELINE_CONFIG_H_

#include <filesystem>
#include <string>
#include "absl/strings/string_view.h"
#include <vector>

#include "absl/status/statusor.h"
#include "absl/time/time.h"
#include "tflifeline/history.h"
#include "tflifeline/lifecycle.h"
#include "tflifeline/stats.h"

namespace tflife {

// Every tunable of the pipeline. Defaults reproduce the study setup.
//
// File format: TOML-style `key = value` lines, `#` comments, optional
// `[section]` headers that prefix the following keys ("[doa]" + "fa = 1.1"
// sets "doa.fa"). Recognized keys:
//
//   doa.base doa.fa doa.dl doa.ac doa.norm_threshold doa.abs_threshold
//   doa.drop_unauthored         (bool)
//   tf.coverage_threshold
//   snapshot.cadence_months     (int)
//   abandon.threshold           (duration, e.g. "1y")
//   abandon.anchor              ("head" | "snapshot")
//   filters.min_history         (duration)
//   filters.migration_window    (int, commits)
//   filters.migration_fraction
//   rules.file                  (path-rules file; relative to the config)
//   identity.mapping_file       (alias mapping; relative to the config)
//   identity.cache_file         (remote lookup cache)
//   identity.offline            (bool)
//   sensitivity.grid            ("3m,6m,1y,1.5y,2y")
//   stats.exact_max_group       (int)
//   stats.cliff_negligible stats.cliff_small stats.cliff_medium
struct AnalysisConfig {
  LifecycleOptions lifecycle;
  absl::Duration min_history = Years(2);
  MigrationFilterOptions migration;
  std::filesystem::path rules_file;
  std::filesystem::path mapping_file;
  std::filesystem::path cache_file;
  bool offline = false;
  std::vector<absl::Duration> sensitivity_grid;
  MannWhitneyOptions mann_whitney;
  CliffCutPoints cliff;

  AnalysisConfig();
};

// `base_dir` resolves relative file paths.
absl::StatusOr<AnalysisConfig> ParseConfig(absl::string_view text,
                                           const std::filesystem::path& base_dir = {});

// Also loads the rules file, if one is named.
absl::StatusOr<AnalysisConfig> LoadConfig(const std::filesystem::path& file);

// "3m,6m,1y" -> durations.
absl::StatusOr<std::vector<absl::Duration>> ParseGrid(absl::string_view text);

}  // namespace tflife

#endif  // TFLIFELINE_CONFIG_H_
