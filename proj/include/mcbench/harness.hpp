// Copyright 2026 The mcbench Authors.
//
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

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "mcbench/chain.hpp"
#include "mcbench/density.hpp"
#include "mcbench/diagnostics.hpp"
#include "mcbench/exec.hpp"
#include "mcbench/metrics.hpp"
#include "mcbench/samplers.hpp"

namespace mcbench {

enum class BudgetMode { wallclock, evals };

std::string to_string(BudgetMode mode);
BudgetMode budget_mode_from_string(const std::string& s);
std::string to_string(InitMode mode);
InitMode init_mode_from_string(const std::string& s);

struct RunConfig {
  std::vector<std::string> examples;  // bundled names or density file paths
  std::vector<SamplerSpec> samplers;
  int chains = 8;
  BudgetMode budget_mode = BudgetMode::wallclock;
  double budget = 900.0;  // CPU seconds or evaluations
  int checkpoints = 100;
  InitMode init_mode = InitMode::exact_sample;
  std::uint64_t seed = 0;
  std::filesystem::path output_dir = "mcbench-out";
  std::size_t ground_truth_samples = 100000;
  double adapt_fraction = 0.2;
  Exec exec = Exec::parallel;

  void validate() const;
};

/// Run-configuration document (JSON). Samplers are either a kind name or an
/// object {"kind", "name", <parameter overrides>, "components", "weights"}.
RunConfig run_config_from_json(const std::string& text);
RunConfig load_run_config(const std::filesystem::path& path);
std::string run_config_to_json(const RunConfig& config);

SamplerSpec sampler_spec_from_json_text(const std::string& text);
std::string sampler_spec_to_json_text(const SamplerSpec& spec);

std::uint64_t chain_seed(std::uint64_t master, const std::string& example,
                         const std::string& sampler, int chain);
std::uint64_t ground_truth_seed(std::uint64_t master, const std::string& example);

/// One budgeted chain. Initialization and sampler construction are not
/// charged to the budget. Failures (non-finite states, walker collapse,
/// kernel errors) end the chain early with `failed` set.
Chain run_chain(std::shared_ptr<const BenchmarkDensity> density, const std::string& example,
                const SamplerSpec& spec, const RunConfig& config, int chain_index);

/// config.chains chains of `spec` on `density`.
std::vector<Chain> run_pair(std::shared_ptr<const BenchmarkDensity> density,
                            const std::string& example, const SamplerSpec& spec,
                            const RunConfig& config);

struct Example {
  std::string id;
  std::shared_ptr<const BenchmarkDensity> density;
  GroundTruth truth;
};

struct RunArtifacts {
  RunConfig config;
  std::vector<Example> examples;
  std::vector<Chain> chains;  // ordered by (example, sampler, chain)

  const Example& example(const std::string& id) const;
  std::vector<const Chain*> chains_of(const std::string& example, const std::string& sampler) const;
};

/// Ground truth plus the full (example, sampler, chain) grid. The grid runs
/// as one OpenMP loop when config.exec is parallel.
RunArtifacts run_benchmark(const RunConfig& config);

/// Writes manifest.json, run_config.json, densities/, ground_truth/ and
/// chains/ under `dir`.
void save_artifacts(const RunArtifacts& artifacts, const std::filesystem::path& dir);
RunArtifacts load_artifacts(const std::filesystem::path& dir);

void save_ground_truth(const GroundTruth& truth, const std::filesystem::path& stem);
GroundTruth load_ground_truth(const std::filesystem::path& stem);

/// Chain-only diagnostics on the first prefix[k] rows of each chain. Chains
/// with several walkers are split per walker for ESS and Geweke.
DiagnosticsRecord diagnose(const std::vector<const Chain*>& chains,
                           const std::vector<std::size_t>& prefix);

inline constexpr std::size_t kMinScoredSamples = 8;

struct ScoreRow {
  std::string example;
  std::string sampler;
  int checkpoint = 0;  // 1-based
  EstimatorKind kind = EstimatorKind::mean_d;
  int dim = -1;        // -1 for multivariate rows
  int chains = 0;      // K actually scored
  double n_harmonic = 0.0;
  double ress = 0.0;
  double eff = 0.0;
  double ness = 0.0;
  double essd = 0.0;
  bool essd_flagged = false;
  bool success = false;
  bool absent = false;
  double ess = 0.0;    // mean per-chain ESS
  double gelman_rubin = 0.0;
  double geweke = 0.0;
};

using ScoreTable = std::vector<ScoreRow>;

/// Scores every (example, sampler, checkpoint, estimator) and fills NESS
/// once all samplers of an example are in.
ScoreTable score_runs(const RunArtifacts& artifacts, Exec exec = Exec::parallel);

/// NESS for every row: RESS over the median, across samplers on the same
/// example and checkpoint, of their harmonic-mean chain lengths.
void assign_ness(ScoreTable& table);

void write_score_table(const ScoreTable& table, const std::filesystem::path& path);
ScoreTable read_score_table(const std::filesystem::path& path);
std::string score_table_to_csv(const ScoreTable& table);
ScoreTable score_table_from_csv(const std::string& text);

struct KindSummary {
  std::size_t rows = 0;       // non-absent rows
  std::size_t successes = 0;
  double success_prob = 0.0;
  double mean_ness = 0.0;     // over rows with finite RESS
  std::vector<double> ness_quartiles;  // given success, finite only
  std::vector<double> eff_quartiles;
};

struct SamplerSummary {
  std::string sampler;
  std::map<EstimatorKind, KindSummary> kinds;
};

struct Summary {
  int checkpoint = 0;
  std::vector<SamplerSummary> samplers;
};

/// Final-checkpoint summary per sampler and estimator kind.
Summary summarize(const ScoreTable& table);
std::string summary_to_json(const Summary& summary);

/// Diagnostics at every checkpoint as a delimited table.
std::string diagnostics_csv(const RunArtifacts& artifacts);

}  // namespace mcbench
