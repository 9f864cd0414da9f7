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

#ifndef TFLIFELINE_REPORT_H_
#define TFLIFELINE_REPORT_H_

#include <filesystem>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "tflifeline/corpus.h"
#include "tflifeline/sensitivity.h"

namespace tflife {

enum class ReportFormat { kJson, kCsv, kAll };

absl::StatusOr<ReportFormat> ParseReportFormat(absl::string_view name);

// Rounds to 6 significant digits, the precision of every reported real.
double Sig6(double v);

// Stable key order, 6-significant-digit reals, ISO-8601 instants.
std::string RenderReportJson(const CorpusReport& report);

// CSV tables for external plotting, keyed by file name:
//   projects.csv          one row per list entry
//   tf_histogram.csv      TF at head
//   tfdd_by_tf.csv        TFDD events by TF at the event
//   repo_age.csv          age of projects with a TFDD (years)
//   tfdd_timing.csv       first TFDD, years after creation
//   commits_after.csv     commits after the last TFDD, per project
//   cohort_comparison.csv surviving vs non-surviving tests
//   survival.csv          attraction delay and newcomer composition
std::vector<std::pair<std::string, std::string>> RenderReportCsv(const CorpusReport& report);

// Writes report.json and/or the CSV tables into `out_dir` (created if
// needed). Returns the written paths in a fixed order.
absl::StatusOr<std::vector<std::filesystem::path>> EmitReport(
    const CorpusReport& report, ReportFormat format, const std::filesystem::path& out_dir);

// Table mirroring the threshold-sensitivity layout: threshold, precision,
// improvement, harmonic mean ("-" where undefined).
std::string RenderSensitivityCsv(const SensitivityReport& report);

}  // namespace tflife

#endif  // TFLIFELINE_REPORT_H_
