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
#include <utility>
#include <vector>

#include "mcbench/density.hpp"
#include "mcbench/exec.hpp"
#include "mcbench/rng.hpp"

namespace mcbench {

struct FitConfig {
  /// Candidate component counts. Empty selects default_component_grid.
  std::vector<int> component_grid;
  int cv_folds = 5;
  int max_em_iters = 500;
  double em_tol = 1e-5;  // relative change of the training log-likelihood
  int restarts = 5;
  std::uint64_t seed = 0;
  Exec exec = Exec::parallel;

  void validate() const;
};

/// {1, 2, 5, 10, 25} capped at floor(n / (10 D)), never empty.
std::vector<int> default_component_grid(std::size_t n, int dim);

struct FitReport {
  int chosen_components = 0;
  double heldout_loglik_per_point = 0.0;
  std::vector<std::pair<int, double>> candidate_scores;  // (C, mean CV log-lik per point)
  AffineTransform standardization;
};

/// Mean training log-likelihood per point after every EM iteration, one
/// trace per restart.
struct EmTrace {
  std::vector<std::vector<double>> restarts;
};

/// E-step: writes responsibilities (n x C) and returns the total
/// log-likelihood. Serial reference and OpenMP over rows give identical
/// output.
double em_e_step(const MixtureOfGaussians& model, const Matrix& data, Matrix& resp,
                 Exec exec = Exec::parallel);

/// EM for a C-component full-covariance mixture, best of config.restarts
/// k-means++ seeded runs. A component whose weight drops below 1/(10n) or
/// whose covariance cannot be repaired is pruned and the fit restarted once;
/// a second failure raises FitError.
MixtureOfGaussians fit_mog_em(const Matrix& data, int components, const FitConfig& config,
                              Rng& rng, EmTrace* trace = nullptr);

/// Mean per-point log density in nats.
double heldout_loglik(const MixtureOfGaussians& model, const Matrix& data);

/// K-fold CV over config.component_grid; ties go to the smaller C.
int cv_select_components(const Matrix& data, const FitConfig& config, Rng& rng,
                         std::vector<std::pair<int, double>>* scores = nullptr);

/// Temporal 80/20 split, per-dimension standardization of the training
/// block, CV selection, refit, and the inverse standardization attached as
/// the density's affine map. Requires n >= 50 D.
std::pair<BenchmarkDensity, FitReport> fit_surrogate(const Matrix& chain_data,
                                                     const FitConfig& config,
                                                     const std::string& name = "surrogate");

/// Rows held out by fit_surrogate: the final ceil(0.2 n).
std::size_t heldout_rows(std::size_t n);

}  // namespace mcbench
