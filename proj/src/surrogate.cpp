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

#include "mcbench/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <string>

#include "mcbench/error.hpp"

namespace mcbench {

namespace {

struct DegenerateComponent {
  int component;
};

Matrix pooled_covariance(const Matrix& data) {
  const Eigen::RowVectorXd mean = data.colwise().mean();
  const Matrix centered = data.rowwise() - mean;
  return centered.transpose() * centered / static_cast<double>(data.rows());
}

std::vector<Vector> kmeanspp_means(const Matrix& data, int components, Rng& rng) {
  const Eigen::Index n = data.rows();
  auto pick = [&](Eigen::Index bound) {
    return std::min<Eigen::Index>(bound - 1, static_cast<Eigen::Index>(uniform01(rng) * bound));
  };
  std::vector<Vector> means{data.row(pick(n)).transpose()};
  Vector d2 = (data.rowwise() - means[0].transpose()).rowwise().squaredNorm();
  while (static_cast<int>(means.size()) < components) {
    const double total = d2.sum();
    Eigen::Index chosen = pick(n);
    if (total > 0.0) {
      const double target = uniform01(rng) * total;
      double acc = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        acc += d2[i];
        if (acc > target) {
          chosen = i;
          break;
        }
      }
    }
    means.push_back(data.row(chosen).transpose());
    d2 = d2.cwiseMin((data.rowwise() - means.back().transpose()).rowwise().squaredNorm());
  }
  return means;
}

struct EmRun {
  MixtureOfGaussians model;
  double loglik;  // mean per point
};

EmRun run_em(const Matrix& data, int components, const FitConfig& config, Rng& rng,
             std::vector<double>* trace) {
  const Eigen::Index n = data.rows();
  const double min_weight = 1.0 / (10.0 * static_cast<double>(n));

  std::vector<Matrix> chol;
  try {
    chol.assign(components, cholesky_with_jitter(pooled_covariance(data)));
  } catch (const NotPositiveDefinite&) {
    throw DegenerateComponent{0};
  }
  MixtureOfGaussians model(Vector::Constant(components, 1.0 / components),
                           kmeanspp_means(data, components, rng), chol);

  Matrix resp(n, components);
  double ll = em_e_step(model, data, resp, config.exec) / static_cast<double>(n);
  if (trace) trace->push_back(ll);
  for (int it = 0; it < config.max_em_iters; ++it) {
    const Vector nk = resp.colwise().sum().transpose();
    std::vector<Vector> means;
    std::vector<Matrix> factors;
    for (int c = 0; c < components; ++c) {
      if (!(nk[c] / static_cast<double>(n) >= min_weight)) throw DegenerateComponent{c};
      const Vector mu = data.transpose() * resp.col(c) / nk[c];
      const Matrix centered = data.rowwise() - mu.transpose();
      const Matrix weighted = centered.array().colwise() * resp.col(c).array();
      const Matrix cov = weighted.transpose() * centered / nk[c];
      try {
        factors.push_back(cholesky_with_jitter(cov));
      } catch (const NotPositiveDefinite&) {
        throw DegenerateComponent{c};
      }
      means.push_back(mu);
    }
    model = MixtureOfGaussians(nk / nk.sum(), std::move(means), std::move(factors));
    const double next = em_e_step(model, data, resp, config.exec) / static_cast<double>(n);
    if (trace) trace->push_back(next);
    const bool converged = std::abs(next - ll) <= config.em_tol * std::max(std::abs(ll), 1e-300);
    ll = next;
    if (converged) break;
  }
  return {std::move(model), ll};
}

// Best of config.restarts runs at `components`; nullopt when every restart
// degenerates.
std::optional<EmRun> best_of_restarts(const Matrix& data, int components,
                                      const FitConfig& config, std::uint64_t base,
                                      EmTrace* trace) {
  std::optional<EmRun> best;
  for (int r = 0; r < config.restarts; ++r) {
    Rng rng(derive_seed(base, {static_cast<std::uint64_t>(components),
                               static_cast<std::uint64_t>(r)}));
    std::vector<double> t;
    try {
      EmRun run = run_em(data, components, config, rng, trace ? &t : nullptr);
      if (!best || run.loglik > best->loglik) best = std::move(run);
    } catch (const DegenerateComponent&) {
    }
    if (trace) trace->restarts.push_back(std::move(t));
  }
  return best;
}

}  // namespace

void FitConfig::validate() const {
  for (int c : component_grid) {
    if (c < 1) throw ContractViolation("component_grid entries must be >= 1");
  }
  if (cv_folds < 2) throw ContractViolation("cv_folds must be >= 2");
  if (max_em_iters < 1) throw ContractViolation("max_em_iters must be >= 1");
  if (!(em_tol >= 0.0)) throw ContractViolation("em_tol must be >= 0");
  if (restarts < 1) throw ContractViolation("restarts must be >= 1");
}

std::vector<int> default_component_grid(std::size_t n, int dim) {
  const auto cap = static_cast<int>(n / (10 * static_cast<std::size_t>(std::max(dim, 1))));
  std::vector<int> grid;
  for (int c : {1, 2, 5, 10, 25}) {
    if (c <= std::max(cap, 1)) grid.push_back(c);
  }
  return grid;
}

double em_e_step(const MixtureOfGaussians& model, const Matrix& data, Matrix& resp, Exec exec) {
  const Eigen::Index n = data.rows();
  const int c = model.components();
  resp.resize(n, c);
  Vector row_ll(n);
  // Fixed row blocks: both paths run identical arithmetic per block.
  constexpr Eigen::Index kBlock = 256;
  const Eigen::Index blocks = (n + kBlock - 1) / kBlock;
  auto body = [&](Eigen::Index b) {
    const Eigen::Index begin = b * kBlock;
    const Eigen::Index len = std::min(kBlock, n - begin);
    Matrix lc;
    model.component_log_densities_block(data.middleRows(begin, len), lc);
    for (Eigen::Index i = 0; i < len; ++i) {
      const double m = lc.row(i).maxCoeff();
      const double lse = std::isfinite(m) ? m + std::log((lc.row(i).array() - m).exp().sum()) : m;
      row_ll[begin + i] = lse;
      resp.row(begin + i) = (lc.row(i).array() - lse).exp();
    }
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (Eigen::Index b = 0; b < blocks; ++b) body(b);
  } else {
    for (Eigen::Index b = 0; b < blocks; ++b) body(b);
  }
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) total += row_ll[i];
  return total;
}

MixtureOfGaussians fit_mog_em(const Matrix& data, int components, const FitConfig& config,
                              Rng& rng, EmTrace* trace) {
  config.validate();
  if (components < 1) throw ContractViolation("fit_mog_em: need at least one component");
  if (data.rows() < 2 * static_cast<Eigen::Index>(components)) {
    throw ContractViolation("fit_mog_em: need n >= 2 C rows");
  }
  if (!data.allFinite()) throw ContractViolation("fit_mog_em: data has non-finite entries");
  const std::uint64_t base = rng();
  if (auto run = best_of_restarts(data, components, config, base, trace)) {
    return std::move(run->model);
  }
  // Prune one component and refit once.
  if (components > 1) {
    if (auto run = best_of_restarts(data, components - 1, config, mix64(base), trace)) {
      return std::move(run->model);
    }
  }
  throw FitError("EM failed: degenerate component at C=" + std::to_string(components) +
                 " and after pruning");
}

double heldout_loglik(const MixtureOfGaussians& model, const Matrix& data) {
  if (data.rows() == 0) throw ContractViolation("heldout_loglik: empty data");
  Vector out(data.rows());
  mixture_log_density_rows(model, data, out, Exec::serial);
  return out.mean();
}

int cv_select_components(const Matrix& data, const FitConfig& config, Rng& rng,
                         std::vector<std::pair<int, double>>* scores) {
  config.validate();
  const std::vector<int>& grid = config.component_grid;
  if (grid.empty()) throw ContractViolation("cv_select_components: empty component grid");
  const int folds = config.cv_folds;
  const Eigen::Index n = data.rows();
  if (n < static_cast<Eigen::Index>(folds) * *std::max_element(grid.begin(), grid.end())) {
    throw ContractViolation("cv_select_components: need n >= folds * max(grid)");
  }
  if (grid.size() == 1) {
    if (scores) scores->assign({{grid[0], std::numeric_limits<double>::quiet_NaN()}});
    return grid[0];
  }

  std::vector<Eigen::Index> perm(n);
  std::iota(perm.begin(), perm.end(), Eigen::Index{0});
  std::shuffle(perm.begin(), perm.end(), rng);
  const std::uint64_t base = rng();

  const int tasks = static_cast<int>(grid.size()) * folds;
  std::vector<double> fold_score(tasks, std::numeric_limits<double>::quiet_NaN());
  FitConfig inner = config;
  inner.exec = Exec::serial;
  auto run_task = [&](int t) {
    const int g = t / folds;
    const int f = t % folds;
    std::vector<Eigen::Index> train_idx, test_idx;
    for (Eigen::Index i = 0; i < n; ++i) (i % folds == f ? test_idx : train_idx).push_back(perm[i]);
    const Matrix train = data(train_idx, Eigen::all);
    const Matrix test = data(test_idx, Eigen::all);
    Rng task_rng(derive_seed(base, {static_cast<std::uint64_t>(grid[g]),
                                    static_cast<std::uint64_t>(f)}));
    try {
      fold_score[t] = heldout_loglik(fit_mog_em(train, grid[g], inner, task_rng), test);
    } catch (const FitError&) {
    }
  };
  if (config.exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int t = 0; t < tasks; ++t) run_task(t);
  } else {
    for (int t = 0; t < tasks; ++t) run_task(t);
  }

  int best = -1;
  double best_score = -std::numeric_limits<double>::infinity();
  std::vector<std::pair<int, double>> table;
  // Visit the grid in ascending C so strict '>' breaks ties toward smaller C.
  std::vector<std::size_t> order(grid.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return grid[a] < grid[b]; });
  for (std::size_t g : order) {
    double sum = 0.0;
    bool ok = true;
    for (int f = 0; f < folds; ++f) {
      const double s = fold_score[g * folds + f];
      if (!std::isfinite(s)) ok = false;
      sum += s;
    }
    const double mean = ok ? sum / folds : std::numeric_limits<double>::quiet_NaN();
    table.emplace_back(grid[g], mean);
    if (ok && mean > best_score) {
      best_score = mean;
      best = grid[g];
    }
  }
  if (scores) *scores = std::move(table);
  if (best < 0) throw FitError("cross-validation: every candidate component count failed");
  return best;
}

std::size_t heldout_rows(std::size_t n) { return (n + 4) / 5; }

std::pair<BenchmarkDensity, FitReport> fit_surrogate(const Matrix& chain_data,
                                                     const FitConfig& config,
                                                     const std::string& name) {
  config.validate();
  const auto n = static_cast<std::size_t>(chain_data.rows());
  const int dim = static_cast<int>(chain_data.cols());
  if (dim < 1 || n < 50 * static_cast<std::size_t>(dim)) {
    throw ContractViolation("fit_surrogate: need at least 50 D rows, got " + std::to_string(n));
  }
  if (!chain_data.allFinite()) throw ContractViolation("fit_surrogate: non-finite chain data");

  const std::size_t n_hold = heldout_rows(n);
  const auto n_train = static_cast<Eigen::Index>(n - n_hold);
  const Matrix train = chain_data.topRows(n_train);
  const Matrix held = chain_data.bottomRows(static_cast<Eigen::Index>(n_hold));

  const Vector mean = train.colwise().mean().transpose();
  const Vector sd =
      ((train.rowwise() - mean.transpose()).array().square().colwise().mean()).sqrt().transpose();
  for (int d = 0; d < dim; ++d) {
    if (!(sd[d] > 0.0)) {
      throw FitError("fit_surrogate: dimension " + std::to_string(d) + " has zero spread");
    }
  }
  const Matrix z = (train.rowwise() - mean.transpose()).array().rowwise() / sd.transpose().array();

  FitConfig cfg = config;
  if (cfg.component_grid.empty()) cfg.component_grid = default_component_grid(z.rows(), dim);
  // Keep the CV precondition satisfiable for short chains.
  std::erase_if(cfg.component_grid, [&](int c) {
    return static_cast<Eigen::Index>(cfg.cv_folds) * c > z.rows();
  });
  if (cfg.component_grid.empty()) throw FitError("fit_surrogate: no feasible component count");

  FitReport report;
  Rng cv_rng(derive_seed(config.seed, {hash_id("cv")}));
  report.chosen_components = cv_select_components(z, cfg, cv_rng, &report.candidate_scores);
  Rng refit_rng(derive_seed(config.seed, {hash_id("refit")}));
  MixtureOfGaussians core = fit_mog_em(z, report.chosen_components, cfg, refit_rng);
  report.standardization = AffineTransform{sd, mean};

  BenchmarkDensity density(name, std::move(core), report.standardization);
  double total = 0.0;
  for (Eigen::Index i = 0; i < held.rows(); ++i) total += density.log_density(held.row(i).transpose());
  report.heldout_loglik_per_point = total / static_cast<double>(held.rows());
  return {std::move(density), std::move(report)};
}

}  // namespace mcbench
