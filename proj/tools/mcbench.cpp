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

// Command-line front end: surrogate fitting, benchmark runs, scoring,
// summaries, meta-analysis.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mcbench/error.hpp"
#include "mcbench/harness.hpp"
#include "mcbench/meta.hpp"
#include "mcbench/report.hpp"
#include "mcbench/selftest.hpp"
#include "mcbench/surrogate.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitFailure = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw mcbench::IoError("cannot write " + path.string());
  out << text;
}

// Rows from a chain or ground-truth file (stem, .bin or .json) or a
// comma/space separated text matrix.
mcbench::Matrix read_rows(const fs::path& path) {
  fs::path stem = path;
  if (stem.extension() == ".bin" || stem.extension() == ".json") stem.replace_extension();
  if (fs::exists(stem.string() + ".json") && fs::exists(stem.string() + ".bin")) {
    try {
      const mcbench::Chain c = mcbench::load_chain(stem);
      return c.prefix(c.rows());
    } catch (const mcbench::IoError&) {
      return mcbench::load_ground_truth(stem).samples;
    }
  }
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open input " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    for (char& ch : line) {
      if (ch == ',') ch = ' ';
    }
    std::istringstream ls(line);
    std::vector<double> row;
    double v;
    while (ls >> v) row.push_back(v);
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.empty()) throw mcbench::IoError(path.string() + ": no numeric rows");
  mcbench::Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size()) throw mcbench::IoError(path.string() + ": ragged rows");
    for (std::size_t d = 0; d < rows[i].size(); ++d) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d)) = rows[i][d];
    }
  }
  return m;
}

mcbench::ScoreTable read_tables(const std::vector<std::string>& paths) {
  mcbench::ScoreTable all;
  for (const auto& p : paths) {
    const auto t = mcbench::read_score_table(p);
    all.insert(all.end(), t.begin(), t.end());
  }
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mcbench: benchmark MCMC samplers against exactly-samplable targets"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  std::string config_path, out_dir, budget_mode, init_mode, format = "both";
  double budget = 0.0;
  int chains = 0, checkpoints = 0;

  // fit-surrogate
  auto* fit = app.add_subcommand("fit-surrogate", "fit a mixture-of-Gaussians surrogate to chain data");
  std::vector<std::string> fit_inputs;
  std::string fit_name = "surrogate";
  std::vector<int> fit_grid;
  fit->add_option("--input", fit_inputs, "chain or ground-truth files (stem, .bin or .json) or text matrices")
      ->required();
  fit->add_option("--out", out_dir, "output density file (.json)")->required();
  fit->add_option("--name", fit_name, "density name");
  fit->add_option("--grid", fit_grid, "candidate component counts");
  fit->add_option("--seed", seed, "master seed");

  // ground-truth
  auto* gt = app.add_subcommand("ground-truth", "draw and store exact ground-truth samples");
  std::string gt_example;
  std::size_t gt_n = 100000;
  gt->add_option("--example", gt_example, "bundled name or density file")->required();
  gt->add_option("--n", gt_n, "number of draws")->check(CLI::PositiveNumber);
  gt->add_option("--seed", seed, "master seed");
  gt->add_option("--out", out_dir, "output directory")->required();

  // run
  auto* run = app.add_subcommand("run", "budgeted runs over the example x sampler grid");
  run->add_option("--config", config_path, "run configuration (JSON)")->required()->check(CLI::ExistingFile);
  auto* run_seed = run->add_option("--seed", seed, "master seed");
  auto* run_mode = run->add_option("--budget-mode", budget_mode, "wallclock or evals")
                       ->check(CLI::IsMember({"wallclock", "evals"}));
  auto* run_budget = run->add_option("--budget", budget, "CPU seconds or evaluations per chain")
                         ->check(CLI::PositiveNumber);
  auto* run_chains = run->add_option("--chains", chains, "chains per pair")->check(CLI::PositiveNumber);
  auto* run_cp = run->add_option("--checkpoints", checkpoints, "checkpoint count")->check(CLI::PositiveNumber);
  auto* run_init = run->add_option("--init", init_mode, "exact or approx")->check(CLI::IsMember({"exact", "approx"}));
  auto* run_out = run->add_option("--out", out_dir, "output directory");

  // score
  auto* score = app.add_subcommand("score", "score a finished run against its ground truth");
  score->add_option("--out", out_dir, "run directory")->required()->check(CLI::ExistingDirectory);
  score->add_option("--format", format, "table-text, delimited or both")
      ->check(CLI::IsMember({"table-text", "delimited", "both"}));

  // summarize
  auto* summ = app.add_subcommand("summarize", "summary document and report from score tables");
  std::vector<std::string> score_files;
  summ->add_option("--scores", score_files, "scores.csv files")->required()->check(CLI::ExistingFile);
  summ->add_option("--out", out_dir, "output directory")->required();
  summ->add_option("--format", format, "table-text, delimited or both")
      ->check(CLI::IsMember({"table-text", "delimited", "both"}));

  // meta-analyze
  auto* meta = app.add_subcommand("meta-analyze", "GP meta-regression of ESSD on diagnostics");
  double test_frac = 0.2;
  meta->add_option("--scores", score_files, "scores.csv files")->required()->check(CLI::ExistingFile);
  meta->add_option("--seed", seed, "split and restart seed");
  meta->add_option("--test-frac", test_frac, "fraction of examples held out");
  meta->add_option("--out", out_dir, "output directory")->required();

  auto* list = app.add_subcommand("list-examples", "print the bundled densities");
  auto* self = app.add_subcommand("selftest", "run the built-in oracle checks");
  self->add_option("--seed", seed, "seed for the simulated checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*fit) {
      mcbench::Matrix data;
      for (const auto& in : fit_inputs) {
        const mcbench::Matrix m = read_rows(in);
        if (data.size() != 0 && m.cols() != data.cols()) throw UsageError("inputs differ in dimension");
        mcbench::Matrix joined(data.rows() + m.rows(), m.cols());
        if (data.rows() > 0) joined.topRows(data.rows()) = data;
        joined.bottomRows(m.rows()) = m;
        data = std::move(joined);
      }
      mcbench::FitConfig cfg;
      cfg.seed = seed;
      cfg.component_grid = fit_grid;
      auto [density, report] = mcbench::fit_surrogate(data, cfg, fit_name);
      mcbench::save_density(density, out_dir);
      json scores = json::array();
      for (const auto& [c, s] : report.candidate_scores) {
        scores.push_back({{"components", c}, {"cv_loglik_per_point", std::isfinite(s) ? json(s) : json(nullptr)}});
      }
      const auto& t = report.standardization;
      json doc{{"chosen_components", report.chosen_components},
               {"heldout_loglik_per_point", report.heldout_loglik_per_point},
               {"candidate_scores", scores},
               {"standardization",
                {{"scale", std::vector<double>(t.scale.data(), t.scale.data() + t.scale.size())},
                 {"shift", std::vector<double>(t.shift.data(), t.shift.data() + t.shift.size())}}},
               {"rows", data.rows()},
               {"seed", seed}};
      fs::path report_path = out_dir;
      report_path.replace_extension(".report.json");
      write_text(report_path, doc.dump(2) + "\n");
      std::cout << "chose C=" << report.chosen_components << ", held-out log-lik/point "
                << report.heldout_loglik_per_point << "\n";
    } else if (*gt) {
      const mcbench::BenchmarkDensity density = mcbench::resolve_density(gt_example);
      const auto truth = mcbench::generate_ground_truth(
          density, gt_n, mcbench::ground_truth_seed(seed, density.name()));
      fs::create_directories(out_dir);
      mcbench::save_ground_truth(truth, fs::path(out_dir) / density.name());
      std::cout << "wrote " << gt_n << " draws for " << density.name() << "\n";
    } else if (*run) {
      mcbench::RunConfig cfg;
      try {
        cfg = mcbench::load_run_config(config_path);
        if (*run_seed) cfg.seed = seed;
        if (*run_mode) cfg.budget_mode = mcbench::budget_mode_from_string(budget_mode);
        if (*run_budget) cfg.budget = budget;
        if (*run_chains) cfg.chains = chains;
        if (*run_cp) cfg.checkpoints = checkpoints;
        if (*run_init) cfg.init_mode = mcbench::init_mode_from_string(init_mode);
        if (*run_out) cfg.output_dir = out_dir;
        cfg.validate();
      } catch (const mcbench::ContractViolation& e) {
        throw UsageError(e.what());
      }
      const auto artifacts = mcbench::run_benchmark(cfg);
      mcbench::save_artifacts(artifacts, cfg.output_dir);
      write_text(cfg.output_dir / "diagnostics.csv", mcbench::diagnostics_csv(artifacts));
      std::size_t failed = 0;
      for (const auto& c : artifacts.chains) failed += c.failed ? 1 : 0;
      std::cout << "ran " << artifacts.chains.size() << " chains (" << failed << " failed) into "
                << cfg.output_dir.string() << "\n";
    } else if (*score) {
      const auto artifacts = mcbench::load_artifacts(out_dir);
      const auto table = mcbench::score_runs(artifacts);
      mcbench::write_score_table(table, fs::path(out_dir) / "scores.csv");
      const auto summary = mcbench::summarize(table);
      write_text(fs::path(out_dir) / "summary.json", mcbench::summary_to_json(summary) + "\n");
      mcbench::emit_report(summary, table, out_dir, mcbench::report_format_from_string(format));
      std::cout << mcbench::summary_table_text(summary);
    } else if (*summ) {
      const auto table = read_tables(score_files);
      if (table.empty()) throw UsageError("score tables are empty");
      const auto summary = mcbench::summarize(table);
      fs::create_directories(out_dir);
      write_text(fs::path(out_dir) / "summary.json", mcbench::summary_to_json(summary) + "\n");
      mcbench::emit_report(summary, table, out_dir, mcbench::report_format_from_string(format));
      std::cout << mcbench::summary_table_text(summary);
    } else if (*meta) {
      const auto dataset = mcbench::build_meta_dataset(read_tables(score_files));
      const auto [train, test] = mcbench::split_by_example(dataset, test_frac, seed);
      mcbench::GpFitOptions opts;
      opts.seed = seed;
      const auto results = mcbench::evaluate_models(train, test, opts);
      write_text(fs::path(out_dir) / "meta_results.csv", mcbench::meta_results_csv(results));
      write_text(fs::path(out_dir) / "meta_results.txt", mcbench::meta_results_text(results));
      std::cout << "rows " << dataset.rows.size() << " (excluded " << dataset.excluded << "), train "
                << train.rows.size() << ", test " << test.rows.size() << "\n"
                << mcbench::meta_results_text(results);
    } else if (*list) {
      for (const auto& name : mcbench::bundled_density_names()) {
        std::cout << name << '\t' << mcbench::bundled_density(name).dim() << '\n';
      }
    } else if (*self) {
      return mcbench::run_selftest(std::cout, seed) ? 0 : kExitFailure;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return 0;
}
