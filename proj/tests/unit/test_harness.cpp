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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "mcbench/error.hpp"
#include "mcbench/harness.hpp"
#include "mcbench/special.hpp"

namespace mcbench {
namespace {

namespace fs = std::filesystem;

RunConfig evals_config(std::vector<std::string> examples, std::vector<SamplerSpec> samplers,
                       double budget, int chains = 4, int checkpoints = 10) {
  RunConfig c;
  c.examples = std::move(examples);
  c.samplers = std::move(samplers);
  c.chains = chains;
  c.budget_mode = BudgetMode::evals;
  c.budget = budget;
  c.checkpoints = checkpoints;
  c.seed = 42;
  c.ground_truth_samples = 20000;
  c.exec = Exec::serial;
  return c;
}

SamplerSpec named(SamplerKind kind, const std::string& name) {
  return SamplerSpec::defaults(kind, name);
}

fs::path scratch(const std::string& leaf) {
  const auto p = fs::temp_directory_path() / ("mcbench_harness_" + leaf);
  fs::remove_all(p);
  return p;
}

// Artifacts whose chains are filled by `fill(example, chain index)` rather
// than by a sampler: a test double for scoring.
template <class Fill>
RunArtifacts pseudo_artifacts(const std::string& example, const std::string& sampler, int chains,
                              std::size_t n, int checkpoints, Fill fill) {
  RunArtifacts art;
  art.config = evals_config({example}, {named(SamplerKind::rwm_gauss, sampler)}, double(n), chains,
                            checkpoints);
  auto d = std::make_shared<const BenchmarkDensity>(bundled_density(example));
  art.examples.push_back({example, d, generate_ground_truth(*d, 100000, ground_truth_seed(42, example))});
  for (int k = 0; k < chains; ++k) {
    Chain c;
    c.example = example;
    c.sampler = sampler;
    c.index = k;
    c.dim = d->dim();
    const Matrix x = fill(*d, k, n);
    for (Eigen::Index i = 0; i < x.rows(); ++i) c.append(x.row(i).transpose());
    for (int j = 1; j <= checkpoints; ++j) {
      c.checkpoints.push_back({std::uint64_t(n * j / checkpoints), n * j / checkpoints, 0.0});
    }
    c.evaluations = n;
    art.chains.push_back(std::move(c));
  }
  return art;
}

Matrix iid_fill(const BenchmarkDensity& d, int k, std::size_t n) {
  Rng rng(derive_seed(7, {std::uint64_t(k)}));
  return d.sample_exact(n, rng);
}

TEST(RunChain, RwmUsesExactlyTheBudget) {
  auto d = std::make_shared<const BenchmarkDensity>(bundled_density("gauss-10d"));
  const auto cfg = evals_config({"gauss-10d"}, {named(SamplerKind::rwm_gauss, "rwm")}, 10000);
  const Chain c = run_chain(d, "gauss-10d", cfg.samplers[0], cfg, 0);
  EXPECT_FALSE(c.failed);
  EXPECT_EQ(c.evaluations, 10000u);
  EXPECT_EQ(c.rows(), 10000u);
  EXPECT_EQ(c.stats.proposals, 10000u);
}

TEST(RunChain, BudgetNeverExceededAndCheckpointsMonotone) {
  for (auto kind : {SamplerKind::hmc, SamplerKind::nuts, SamplerKind::slice, SamplerKind::emcee,
                    SamplerKind::mix}) {
    auto d = std::make_shared<const BenchmarkDensity>(bundled_density("mog2-2d"));
    const auto cfg = evals_config({"mog2-2d"}, {named(kind, to_string(kind))}, 7777, 4, 25);
    const Chain c = run_chain(d, "mog2-2d", cfg.samplers[0], cfg, 1);
    EXPECT_FALSE(c.failed) << c.failure;
    EXPECT_LE(c.evaluations, 7777u);
    ASSERT_EQ(c.checkpoints.size(), 25u);
    for (std::size_t j = 0; j < c.checkpoints.size(); ++j) {
      EXPECT_GE(double(c.checkpoints[j].evaluations) + 200.0, 7777.0 * double(j + 1) / 25.0)
          << to_string(kind);
      if (j > 0) {
        EXPECT_LE(c.checkpoints[j - 1].samples, c.checkpoints[j].samples);
        EXPECT_LE(c.checkpoints[j - 1].evaluations, c.checkpoints[j].evaluations);
      }
    }
    EXPECT_EQ(c.checkpoints.back().samples, c.rows());
  }
}

TEST(RunChain, CheckpointsAtBudgetFractions) {
  auto d = std::make_shared<const BenchmarkDensity>(bundled_density("gauss-1d"));
  const auto cfg = evals_config({"gauss-1d"}, {named(SamplerKind::rwm_gauss, "rwm")}, 900, 1, 100);
  const Chain c = run_chain(d, "gauss-1d", cfg.samplers[0], cfg, 0);
  for (int j = 1; j <= 100; ++j) EXPECT_EQ(c.checkpoints[j - 1].evaluations, std::uint64_t(9 * j));
}

TEST(RunChain, WallclockWithinTwoPercent) {
  auto d = std::make_shared<const BenchmarkDensity>(bundled_density("gauss-10d"));
  auto cfg = evals_config({"gauss-10d"}, {named(SamplerKind::rwm_gauss, "rwm")}, 0.5, 1, 10);
  cfg.budget_mode = BudgetMode::wallclock;
  const Chain c = run_chain(d, "gauss-10d", cfg.samplers[0], cfg, 0);
  EXPECT_NEAR(c.cpu_seconds, 0.5, 0.01);
  ASSERT_EQ(c.checkpoints.size(), 10u);
  for (int j = 1; j <= 10; ++j) {
    EXPECT_GE(c.checkpoints[j - 1].cpu_seconds, 0.05 * j - 1e-9);
    EXPECT_LT(c.checkpoints[j - 1].cpu_seconds, 0.05 * j + 0.01);
  }
}

TEST(RunPair, DeterministicInEvalsMode) {
  auto d = std::make_shared<const BenchmarkDensity>(bundled_density("corr-2d"));
  const auto cfg = evals_config({"corr-2d"}, {named(SamplerKind::nuts, "nuts")}, 5000);
  const auto a = run_pair(d, "corr-2d", cfg.samplers[0], cfg);
  const auto b = run_pair(d, "corr-2d", cfg.samplers[0], cfg);
  ASSERT_EQ(a.size(), 4u);
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].data, b[k].data);
    EXPECT_EQ(a[k].seed, b[k].seed);
  }
  EXPECT_NE(a[0].data, a[1].data);
}

TEST(GroundTruth, DeterministicAndCached) {
  const auto d = bundled_density("mog2-2d");
  const auto a = generate_ground_truth(d, 5000, 3), b = generate_ground_truth(d, 5000, 3);
  EXPECT_EQ(a.samples, b.samples);
  const auto stem = scratch("gt") / "truth";
  fs::create_directories(stem.parent_path());
  save_ground_truth(a, stem);
  const auto c = load_ground_truth(stem);
  EXPECT_EQ(c.samples, a.samples);
  const Vector sd = ((c.samples.rowwise() - c.samples.colwise().mean()).array().square().colwise().mean())
                        .sqrt()
                        .transpose();
  EXPECT_LT((c.std - sd).cwiseAbs().maxCoeff(), 1e-12);
  fs::remove_all(stem.parent_path());
}

TEST(RunBenchmark, ManifestRecordsDefaultsAndRoundTrips) {
  auto cfg = evals_config({"gauss-1d", "corr-2d"},
                          {named(SamplerKind::rwm_gauss, "rwm"), named(SamplerKind::slice, "slice")},
                          3000, 2, 5);
  cfg.ground_truth_samples = 100000;
  const auto art = run_benchmark(cfg);
  EXPECT_EQ(art.chains.size(), 8u);
  const auto dir = scratch("art");
  save_artifacts(art, dir);
  std::ifstream in(dir / "manifest.json");
  const auto manifest = nlohmann::json::parse(in);
  EXPECT_EQ(manifest.at("ground_truth_samples").get<std::size_t>(), 100000u);
  const auto back = load_artifacts(dir);
  ASSERT_EQ(back.chains.size(), art.chains.size());
  for (std::size_t i = 0; i < art.chains.size(); ++i) {
    EXPECT_EQ(back.chains[i].data, art.chains[i].data);
    EXPECT_EQ(back.chains[i].checkpoints.size(), art.chains[i].checkpoints.size());
  }
  EXPECT_EQ(back.example("corr-2d").truth.samples, art.example("corr-2d").truth.samples);
  const auto s1 = score_table_to_csv(score_runs(art, Exec::serial));
  const auto s2 = score_table_to_csv(score_runs(back, Exec::serial));
  EXPECT_EQ(s1, s2);
  fs::remove_all(dir);
}

TEST(RunBenchmark, RerunReproducesScores) {
  const auto cfg = evals_config({"mog2-1d"}, {named(SamplerKind::hmc, "hmc")}, 4000, 3, 4);
  EXPECT_EQ(score_table_to_csv(score_runs(run_benchmark(cfg))),
            score_table_to_csv(score_runs(run_benchmark(cfg))));
}

TEST(ScoreRuns, IidPseudoSamplerRessNearN) {
  const std::size_t n = 4000;
  const int k = 8;
  const auto art = pseudo_artifacts("gauss-10d", "iid", k, n, 4, iid_fill);
  const auto table = score_runs(art, Exec::serial);
  const double lo = k / chi2_quantile(0.9995, k), hi = k / chi2_quantile(0.0005, k);
  int rows = 0;
  for (const auto& r : table) {
    if (r.checkpoint != 4 || r.kind != EstimatorKind::mean_d) continue;
    ++rows;
    EXPECT_GT(r.ress / n, lo) << r.dim;
    EXPECT_LT(r.ress / n, hi) << r.dim;
    EXPECT_TRUE(r.success);
    EXPECT_EQ(r.chains, k);
    EXPECT_DOUBLE_EQ(r.n_harmonic, double(n));
  }
  EXPECT_EQ(rows, 10);
  for (const auto& r : table) {
    if (r.checkpoint == 4 && r.kind == EstimatorKind::mean_mv) {
      EXPECT_GT(r.ress / n, 10.0 * k / chi2_quantile(0.9995, 10 * k));
      EXPECT_LT(r.ress / n, 10.0 * k / chi2_quantile(0.0005, 10 * k));
    }
  }
  const auto summary = summarize(table);
  EXPECT_DOUBLE_EQ(summary.samplers.at(0).kinds.at(EstimatorKind::mean_d).success_prob, 1.0);
}

TEST(ScoreRuns, ConstantChainFails) {
  const auto art = pseudo_artifacts("mog2-2d", "stuck", 8, 500, 2, [](const BenchmarkDensity& d, int, std::size_t n) {
    return Matrix(Matrix::Ones(n, 1) * (d.ground_truth_mean() + d.ground_truth_var().cwiseSqrt()).transpose());
  });
  for (const auto& r : score_runs(art, Exec::serial)) {
    if (r.kind == EstimatorKind::mean_d || r.kind == EstimatorKind::ks_d || r.kind == EstimatorKind::var_d) {
      EXPECT_LT(r.ress, 12.0);
      EXPECT_FALSE(r.success);
    }
  }
}

TEST(ScoreRuns, MissingChainsAreAbsent) {
  auto art = pseudo_artifacts("gauss-1d", "iid", 4, 200, 2, iid_fill);
  art.config.samplers.push_back(named(SamplerKind::slice, "ghost"));
  int ghost = 0;
  for (const auto& r : score_runs(art, Exec::serial)) {
    if (r.sampler != "ghost") continue;
    ++ghost;
    EXPECT_TRUE(r.absent);
    EXPECT_TRUE(std::isnan(r.ress));
    EXPECT_FALSE(r.success);
  }
  EXPECT_GT(ghost, 0);
}

TEST(ScoreRuns, NessWithEqualCounts) {
  auto art = pseudo_artifacts("gauss-1d", "a", 4, 1000, 1, iid_fill);
  auto other = pseudo_artifacts("gauss-1d", "b", 4, 1000, 1, [](const BenchmarkDensity& d, int k, std::size_t n) {
    return iid_fill(d, k + 100, n);
  });
  art.config.samplers.push_back(other.config.samplers[0]);
  for (auto& c : other.chains) art.chains.push_back(c);
  for (const auto& r : score_runs(art, Exec::serial)) {
    EXPECT_DOUBLE_EQ(r.ness, r.ress / 1000.0);
    EXPECT_DOUBLE_EQ(r.ness, r.eff);
  }
}

TEST(AssignNess, MedianAcrossSamplersAtCheckpoint) {
  ScoreTable t;
  for (auto [s, n] : {std::pair{"a", 100.0}, {"b", 400.0}, {"c", 1e9}}) {
    ScoreRow r;
    r.example = "x";
    r.sampler = s;
    r.checkpoint = 1;
    r.n_harmonic = n;
    r.ress = 800.0;
    t.push_back(r);
  }
  assign_ness(t);
  for (const auto& r : t) EXPECT_DOUBLE_EQ(r.ness, 2.0);
}

TEST(Summarize, SingleRowAndConditionalFilter) {
  ScoreTable t;
  ScoreRow r;
  r.example = "x";
  r.sampler = "s";
  r.checkpoint = 3;
  r.kind = EstimatorKind::mean_d;
  r.dim = 0;
  r.ress = 50.0;
  r.eff = 0.5;
  r.ness = 0.25;
  r.success = true;
  t.push_back(r);
  auto s = summarize(t);
  EXPECT_EQ(s.checkpoint, 3);
  const auto& k = s.samplers.at(0).kinds.at(EstimatorKind::mean_d);
  EXPECT_DOUBLE_EQ(k.mean_ness, 0.25);
  EXPECT_DOUBLE_EQ(k.success_prob, 1.0);
  EXPECT_DOUBLE_EQ(k.ness_quartiles.at(1), 0.25);
  EXPECT_DOUBLE_EQ(k.eff_quartiles.at(1), 0.5);
  ScoreRow fail = r;
  fail.dim = 1;
  fail.ress = 3.0;
  fail.ness = 99.0;
  fail.eff = 99.0;
  fail.success = false;
  t.push_back(fail);
  s = summarize(t);
  const auto& k2 = s.samplers.at(0).kinds.at(EstimatorKind::mean_d);
  EXPECT_DOUBLE_EQ(k2.success_prob, 0.5);
  for (double q : k2.ness_quartiles) EXPECT_DOUBLE_EQ(q, 0.25);
  // Rows from earlier checkpoints do not enter the final summary.
  ScoreRow early = r;
  early.checkpoint = 1;
  early.ness = 1000.0;
  t.push_back(early);
  EXPECT_DOUBLE_EQ(summarize(t).samplers.at(0).kinds.at(EstimatorKind::mean_d).mean_ness, k2.mean_ness);
}

TEST(ScoreTableCsv, RoundTrip) {
  const auto art = pseudo_artifacts("corr-2d", "iid", 3, 300, 2, iid_fill);
  auto table = score_runs(art, Exec::serial);
  table[0].ress = INFINITY;
  table[1].ness = std::nan("");
  const auto csv = score_table_to_csv(table);
  EXPECT_EQ(score_table_to_csv(score_table_from_csv(csv)), csv);
}

TEST(Config, ParsesAndRejects) {
  const std::string text = R"({
    "examples": ["gauss-1d", "mog2-2d"],
    "samplers": ["nuts", {"kind": "rwm_cauchy", "name": "cauchy-wide", "rwm_target_accept": 0.3},
                 {"kind": "mix", "components": ["nuts", "slice"], "weights": [0.2, 0.8]}],
    "chains": 3,
    "budget": {"mode": "evals", "amount": 20000},
    "checkpoints": 20,
    "init_mode": "approx",
    "seed": 9
  })";
  const auto c = run_config_from_json(text);
  EXPECT_EQ(c.examples.size(), 2u);
  ASSERT_EQ(c.samplers.size(), 3u);
  EXPECT_EQ(c.samplers[1].name, "cauchy-wide");
  EXPECT_DOUBLE_EQ(c.samplers[1].rwm_target_accept, 0.3);
  EXPECT_EQ(c.samplers[2].components.size(), 2u);
  EXPECT_EQ(c.budget_mode, BudgetMode::evals);
  EXPECT_EQ(c.init_mode, InitMode::approx_fit);
  EXPECT_EQ(c.seed, 9u);
  const auto again = run_config_from_json(run_config_to_json(c));
  EXPECT_EQ(run_config_to_json(again), run_config_to_json(c));
  EXPECT_THROW(run_config_from_json(R"({"examples":["gauss-1d"],"samplers":["nuts"],"bogus":1})"),
               ContractViolation);
  EXPECT_THROW(run_config_from_json(R"({"examples":["gauss-1d"],"samplers":[{"kind":"nuts","speed":1}]})"),
               ContractViolation);
  EXPECT_THROW(run_config_from_json(R"({"examples":["gauss-1d"],"samplers":["nuts"],"chains":0})"),
               ContractViolation);
  EXPECT_THROW(run_config_from_json("{"), ContractViolation);
}

TEST(ChainFile, RoundTrip) {
  auto d = std::make_shared<const BenchmarkDensity>(bundled_density("corr-2d"));
  const auto cfg = evals_config({"corr-2d"}, {named(SamplerKind::emcee, "emcee")}, 3000);
  const Chain c = run_chain(d, "corr-2d", cfg.samplers[0], cfg, 2);
  const auto stem = scratch("chain") / "c";
  fs::create_directories(stem.parent_path());
  save_chain(c, stem);
  const Chain e = load_chain(stem);
  EXPECT_EQ(e.data, c.data);
  EXPECT_EQ(e.walkers, c.walkers);
  EXPECT_EQ(e.seed, c.seed);
  EXPECT_EQ(e.evaluations, c.evaluations);
  ASSERT_EQ(e.checkpoints.size(), c.checkpoints.size());
  for (std::size_t j = 0; j < c.checkpoints.size(); ++j) EXPECT_EQ(e.checkpoints[j].samples, c.checkpoints[j].samples);
  fs::remove_all(stem.parent_path());
}

TEST(Diagnose, SplitsWalkers) {
  auto d = std::make_shared<const BenchmarkDensity>(bundled_density("corr-2d"));
  const auto cfg = evals_config({"corr-2d"}, {named(SamplerKind::emcee, "emcee")}, 20000, 2);
  const auto chains = run_pair(d, "corr-2d", cfg.samplers[0], cfg);
  std::vector<const Chain*> ptrs{&chains[0], &chains[1]};
  const auto rec = diagnose(ptrs, {chains[0].rows(), chains[1].rows()});
  EXPECT_EQ(rec.chains, 2);
  ASSERT_EQ(rec.ess.size(), 2u);
  for (int k = 0; k < 2; ++k) {
    EXPECT_GT(rec.ess_per_chain[k], 0.0);
    EXPECT_LE(rec.ess_per_chain[k], double(chains[0].rows()));
    EXPECT_TRUE(std::isfinite(rec.gelman_rubin[k]));
  }
}

}  // namespace
}  // namespace mcbench
