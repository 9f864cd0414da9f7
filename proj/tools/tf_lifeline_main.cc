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

// tf-lifeline: truck factor, TFDD and survival analysis over commit histories.
//
//   tf-lifeline analyze --projects list.txt --config tf.toml --out report/
//   tf-lifeline sensitivity --projects list.txt --grid 3m,6m,1y,1.5y,2y
//   tf-lifeline tf --repo path/to/repo --as-of 2016-01-15
//   tf-lifeline export --repo path/to/repo --out history.jsonl

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "tflifeline/authorship.h"
#include "tflifeline/config.h"
#include "tflifeline/corpus.h"
#include "tflifeline/history.h"
#include "tflifeline/identity.h"
#include "tflifeline/report.h"
#include "tflifeline/sensitivity.h"
#include "tflifeline/truck_factor.h"

namespace {

using tflife::AnalysisConfig;

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

int Fail(const absl::Status& s) {
  std::cerr << "tf-lifeline: " << s.message() << "\n";
  return kExitUsage;
}

struct CommonFlags {
  std::string config;
  std::string abandon_threshold;
  bool offline = false;
  int jobs = 0;
};

absl::StatusOr<AnalysisConfig> ResolveConfig(const CommonFlags& flags) {
  AnalysisConfig cfg;
  if (!flags.config.empty()) {
    absl::StatusOr<AnalysisConfig> loaded = tflife::LoadConfig(flags.config);
    if (!loaded.ok()) return loaded.status();
    cfg = *std::move(loaded);
  }
  if (!flags.abandon_threshold.empty()) {
    absl::StatusOr<absl::Duration> d = tflife::ParseDurationSpec(flags.abandon_threshold);
    if (!d.ok()) return d.status();
    if (*d <= absl::ZeroDuration()) {
      return absl::InvalidArgumentError("--abandon-threshold must be positive");
    }
    cfg.lifecycle.policy.threshold = *d;
  }
  if (flags.offline) cfg.offline = true;
  return cfg;
}

// Remote lookups stay off unless a cache file is configured or a token or
// endpoint is present in the environment.
absl::StatusOr<std::unique_ptr<tflife::CachedAccountLookup>> MaybeRemote(
    const AnalysisConfig& cfg) {
  if (cfg.offline) return nullptr;
  tflife::CachedAccountLookup::Options opts =
      tflife::CachedAccountLookup::OptionsFromEnvironment();
  opts.cache_file = cfg.cache_file;
  const bool configured =
      !cfg.cache_file.empty() || std::getenv("TF_API_URL") || std::getenv("TF_API_TOKEN");
  if (!configured) return nullptr;
  return tflife::CachedAccountLookup::Open(std::move(opts));
}

absl::StatusOr<tflife::CorpusReport> RunFromFlags(const std::string& projects,
                                                  const CommonFlags& flags,
                                                  AnalysisConfig* cfg_out) {
  absl::StatusOr<AnalysisConfig> cfg = ResolveConfig(flags);
  if (!cfg.ok()) return cfg.status();
  auto remote = MaybeRemote(*cfg);
  if (!remote.ok()) return remote.status();
  tflife::RunOptions opts;
  opts.config = *cfg;
  opts.jobs = flags.jobs;
  opts.remote = remote->get();
  if (cfg_out) *cfg_out = *cfg;
  return tflife::RunCorpus(projects, opts);
}

void AddCommon(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config, "key = value configuration file")
      ->check(CLI::ExistingFile);
  cmd->add_option("--abandon-threshold", flags.abandon_threshold,
                  "inactivity that makes a developer an abandoner (e.g. 1y, 6m)");
  cmd->add_flag("--offline", flags.offline, "disable remote alias lookups");
  cmd->add_option("--jobs", flags.jobs, "worker threads (default: CPU count)")
      ->check(CLI::NonNegativeNumber);
}

int RunAnalyze(const std::string& projects, const CommonFlags& flags, const std::string& out,
               const std::string& format_name) {
  absl::StatusOr<tflife::ReportFormat> format = tflife::ParseReportFormat(format_name);
  if (!format.ok()) return Fail(format.status());
  absl::StatusOr<tflife::CorpusReport> report = RunFromFlags(projects, flags, nullptr);
  if (!report.ok()) return Fail(report.status());
  absl::StatusOr<std::vector<std::filesystem::path>> written =
      tflife::EmitReport(*report, *format, out);
  if (!written.ok()) return Fail(written.status());

  const tflife::CorpusAggregates& a = report->aggregates;
  std::cout << absl::StrFormat(
      "%d projects: %d analyzed, %d excluded, %d failed; %d with TFDD, %d survived\n",
      a.projects, a.analyzed, a.excluded, a.failed, a.projects_with_tfdd, a.survived);
  for (const tflife::ProjectOutcome& p : report->projects) {
    if (p.status == tflife::ProjectStatus::kFailed) {
      std::cerr << "failed: " << p.repo_id << ": " << p.failure << "\n";
    }
    for (const std::string& w : p.warnings) std::cerr << "warning: " << p.repo_id << ": " << w << "\n";
  }
  for (const auto& path : *written) std::cout << "wrote " << path.string() << "\n";
  return a.failed == 0 ? 0 : kExitFailure;
}

int RunSensitivity(const std::string& projects, const CommonFlags& flags,
                   const std::string& grid_text, const std::string& out) {
  AnalysisConfig cfg;
  absl::StatusOr<tflife::CorpusReport> report = RunFromFlags(projects, flags, &cfg);
  if (!report.ok()) return Fail(report.status());
  std::vector<absl::Duration> grid = cfg.sensitivity_grid;
  if (!grid_text.empty()) {
    absl::StatusOr<std::vector<absl::Duration>> g = tflife::ParseGrid(grid_text);
    if (!g.ok()) return Fail(g.status());
    grid = *std::move(g);
  }
  std::vector<tflife::InterCommitProfile> profiles;
  for (const tflife::ProjectOutcome& p : report->projects) {
    profiles.insert(profiles.end(), p.tf_profiles.begin(), p.tf_profiles.end());
  }
  absl::StatusOr<tflife::SensitivityReport> sens = tflife::AnalyzeSensitivity(grid, profiles);
  if (!sens.ok()) return Fail(sens.status());

  auto two = [](const std::optional<double>& v) {
    return v ? absl::StrFormat("%.2f", *v) : std::string("-");
  };
  std::cout << absl::StrFormat("%d TF developer profiles\n", sens->profiles);
  std::cout << absl::StrFormat("%-10s %6s %6s %8s\n", "threshold", "P", "impr", "harmonic");
  for (const tflife::SensitivityRow& r : sens->rows) {
    std::cout << absl::StrFormat("%-10s %6.2f %6s %8s\n",
                                 tflife::FormatDurationSpec(r.threshold), r.precision,
                                 two(r.improvement), two(r.harmonic_mean));
  }
  if (!out.empty()) {
    std::ofstream f(out, std::ios::binary | std::ios::trunc);
    f << tflife::RenderSensitivityCsv(*sens);
    if (!f) return Fail(absl::DataLossError("cannot write " + out));
  }
  return 0;
}

int RunTf(const std::string& repo, const std::string& as_of_text, const CommonFlags& flags,
          const std::string& mapping_path) {
  absl::StatusOr<AnalysisConfig> cfg = ResolveConfig(flags);
  if (!cfg.ok()) return Fail(cfg.status());
  absl::StatusOr<tflife::RepositoryHistory> raw = tflife::IngestRepository(repo);
  if (!raw.ok()) return Fail(raw.status());
  std::optional<tflife::AliasMapping> mapping;
  const std::filesystem::path map_file =
      mapping_path.empty() ? cfg->mapping_file : std::filesystem::path(mapping_path);
  if (!map_file.empty()) {
    absl::StatusOr<tflife::AliasMapping> m = tflife::AliasMapping::Load(map_file);
    if (!m.ok()) return Fail(m.status());
    mapping = *std::move(m);
  }
  absl::StatusOr<tflife::ResolutionResult> resolved =
      tflife::ResolveAliases(*raw, mapping ? &*mapping : nullptr, nullptr, "");
  if (!resolved.ok()) return Fail(resolved.status());
  tflife::Instant as_of = resolved->history.head_at();
  if (!as_of_text.empty()) {
    absl::StatusOr<tflife::Instant> t = tflife::ParseInstant(as_of_text);
    if (!t.ok()) return Fail(t.status());
    as_of = *t;
  }
  const tflife::LifecycleOptions& lc = cfg->lifecycle;
  absl::StatusOr<tflife::AuthorshipTable> table =
      tflife::BuildAuthorshipTable(resolved->history, as_of, lc.rules, lc.doa);
  if (!table.ok()) return Fail(table.status());
  absl::StatusOr<tflife::TfSnapshot> tf = tflife::ComputeTruckFactor(*table, lc.coverage_threshold);
  if (!tf.ok()) return Fail(tf.status());
  std::cout << "repository:   " << resolved->history.repo_id() << "\n"
            << "as of:        " << tflife::FormatInstant(as_of) << "\n"
            << "files:        " << table->files.size() << " (" << table->AuthoredFileCount()
            << " with a main author)\n"
            << "truck factor: " << tf->tf << "\n"
            << "TF developers: " << absl::StrJoin(tf->removal_order, ", ") << "\n"
            << absl::StrFormat("coverage after removal: %.6g\n", tf->coverage_at_stop);
  return 0;
}

int RunExport(const std::string& repo, const std::string& out) {
  absl::StatusOr<tflife::RepositoryHistory> h = tflife::IngestRepository(repo);
  if (!h.ok()) return Fail(h.status());
  std::ofstream f(out, std::ios::binary | std::ios::trunc);
  tflife::WriteNormalizedLog(*h, f);
  if (!f) return Fail(absl::DataLossError("cannot write " + out));
  std::cout << "wrote " << h->commits().size() << " commits to " << out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Truck factor, TFDD and project survival analysis"};
  app.require_subcommand(1);

  CommonFlags analyze_flags;
  std::string analyze_projects, analyze_out, analyze_format = "all";
  CLI::App* analyze = app.add_subcommand("analyze", "run the full pipeline over a project list");
  analyze->add_option("--projects", analyze_projects, "project list file")
      ->required()
      ->check(CLI::ExistingFile);
  analyze->add_option("--out", analyze_out, "output directory")->required();
  analyze->add_option("--format", analyze_format, "json, csv or all");
  AddCommon(analyze, analyze_flags);

  CommonFlags sens_flags;
  std::string sens_projects, sens_grid, sens_out;
  CLI::App* sens = app.add_subcommand("sensitivity", "abandonment-threshold sensitivity table");
  sens->add_option("--projects", sens_projects, "project list file")
      ->required()
      ->check(CLI::ExistingFile);
  sens->add_option("--grid", sens_grid, "ascending thresholds, e.g. 3m,6m,1y,1.5y,2y");
  sens->add_option("--out", sens_out, "CSV output file");
  AddCommon(sens, sens_flags);

  CommonFlags tf_flags;
  std::string tf_repo, tf_as_of, tf_mapping;
  CLI::App* tf = app.add_subcommand("tf", "truck factor of one repository at one instant");
  tf->add_option("--repo", tf_repo, "git working tree or normalized log")->required();
  tf->add_option("--as-of", tf_as_of, "instant (ISO-8601, default: last commit)");
  tf->add_option("--mapping", tf_mapping, "alias mapping file");
  AddCommon(tf, tf_flags);

  std::string export_repo, export_out;
  CLI::App* exp = app.add_subcommand("export", "convert a git repository to a normalized log");
  exp->add_option("--repo", export_repo, "git working tree")->required();
  exp->add_option("--out", export_out, "normalized log to write")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  }

  if (*analyze) return RunAnalyze(analyze_projects, analyze_flags, analyze_out, analyze_format);
  if (*sens) return RunSensitivity(sens_projects, sens_flags, sens_grid, sens_out);
  if (*tf) return RunTf(tf_repo, tf_as_of, tf_flags, tf_mapping);
  if (*exp) return RunExport(export_repo, export_out);
  return kExitUsage;
}
