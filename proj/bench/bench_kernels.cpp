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

// Serial reference vs OpenMP for each parallel kernel. The second argument of
// every benchmark selects the path: 0 serial, 1 parallel.

#include <benchmark/benchmark.h>

#include "mcbench/harness.hpp"
#include "mcbench/surrogate.hpp"

namespace {

using namespace mcbench;

Exec exec_of(const benchmark::State& state) { return state.range(1) ? Exec::parallel : Exec::serial; }

Matrix draws(const BenchmarkDensity& d, std::size_t n) {
  Rng rng(1);
  return d.sample_exact(n, rng);
}

void BM_MixtureLogDensityRows(benchmark::State& state) {
  const auto d = bundled_density("mog3-20d");
  const Matrix x = draws(d, static_cast<std::size_t>(state.range(0)));
  Vector out(x.rows());
  for (auto _ : state) {
    mixture_log_density_rows(d.core(), x, out, exec_of(state));
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * x.rows());
}
BENCHMARK(BM_MixtureLogDensityRows)->ArgsProduct({{10000, 100000}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_EmEStep(benchmark::State& state) {
  const auto d = bundled_density("mog8-10d");
  const Matrix x = draws(d, static_cast<std::size_t>(state.range(0)));
  Matrix resp;
  for (auto _ : state) benchmark::DoNotOptimize(em_e_step(d.core(), x, resp, exec_of(state)));
  state.SetItemsProcessed(state.iterations() * x.rows());
}
BENCHMARK(BM_EmEStep)->ArgsProduct({{10000, 100000}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_CvSelect(benchmark::State& state) {
  const auto d = bundled_density("mog2-2d");
  const Matrix x = draws(d, 4000);
  FitConfig cfg;
  cfg.component_grid = {1, 2, 5};
  cfg.restarts = 2;
  cfg.exec = exec_of(state);
  for (auto _ : state) {
    Rng rng(2);
    benchmark::DoNotOptimize(cv_select_components(x, cfg, rng));
  }
}
BENCHMARK(BM_CvSelect)->ArgsProduct({{4000}, {0, 1}})->Unit(benchmark::kMillisecond);

RunConfig grid_config(Exec exec) {
  RunConfig c;
  c.examples = {"gauss-10d", "mog2-2d"};
  c.samplers = {SamplerSpec::defaults(SamplerKind::nuts, "nuts"),
                SamplerSpec::defaults(SamplerKind::slice, "slice")};
  c.chains = 4;
  c.budget_mode = BudgetMode::evals;
  c.budget = 20000;
  c.checkpoints = 10;
  c.ground_truth_samples = 20000;
  c.exec = exec;
  return c;
}

void BM_RunGrid(benchmark::State& state) {
  const auto cfg = grid_config(exec_of(state));
  for (auto _ : state) benchmark::DoNotOptimize(run_benchmark(cfg).chains.size());
}
BENCHMARK(BM_RunGrid)->ArgsProduct({{0}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_ScoreRuns(benchmark::State& state) {
  const auto art = run_benchmark(grid_config(Exec::parallel));
  for (auto _ : state) benchmark::DoNotOptimize(score_runs(art, exec_of(state)).size());
}
BENCHMARK(BM_ScoreRuns)->ArgsProduct({{0}, {0, 1}})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
