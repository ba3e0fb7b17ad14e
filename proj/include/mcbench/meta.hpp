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

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mcbench/density.hpp"
#include "mcbench/harness.hpp"

namespace mcbench {

inline constexpr int kMetaFeatures = 4;
inline constexpr double kFeatureFloor = 1e-12;
inline constexpr double kWinsorLimit = 10.0;

/// Feature order used throughout the meta module.
enum MetaFeature { feature_log_ess = 0, feature_log_gr = 1, feature_log_geweke = 2, feature_dim = 3 };

/// [log ESS, log max(|GR - 1|, 1e-12), log max(|G|, 1e-12), D].
std::array<double, kMetaFeatures> meta_features(double ess, double gelman_rubin, double geweke,
                                                int dim);

struct MetaRow {
  std::string example;
  std::string sampler;
  std::array<double, kMetaFeatures> features{};
  double target = 0.0;  // ESSD of mean estimation
};

struct MetaDataset {
  std::vector<MetaRow> rows;
  std::size_t excluded = 0;  // (example, sampler) pairs dropped: flagged ESSD or non-finite features

  Matrix features() const;
  Vector targets() const;
};

/// One row per (example, sampler) from the final-checkpoint mean_d rows.
/// Features and target are medians over dimensions of the per-dimension
/// values; dimensions with a flagged ESSD are skipped.
MetaDataset build_meta_dataset(const ScoreTable& table);

/// Random partition of example ids; ceil(test_frac * #examples) go to test.
std::pair<MetaDataset, MetaDataset> split_by_example(const MetaDataset& data, double test_frac,
                                                     std::uint64_t seed);

/// Per-column standardization on training statistics, clipped to +-10.
struct FeatureScaler {
  Vector mean;
  Vector std;

  static FeatureScaler fit(const Matrix& x);
  Matrix apply(const Matrix& x) const;
};

struct GpFitOptions {
  int restarts = 5;
  int max_iters = 200;
  std::uint64_t seed = 0;
};

/// Log marginal likelihood of a zero-mean GP with SE-ARD kernel plus noise.
/// theta = [log lengthscale_1..p, log signal sd, log noise sd]. Writes the
/// analytic gradient when `grad` is non-null.
double gp_log_marginal_likelihood(const Matrix& x, const Vector& y, const Vector& theta,
                                  Vector* grad = nullptr);

/// SE-ARD kernel value between two (already scaled) inputs.
double gp_kernel(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b,
                 const Vector& theta);

class GpModel {
 public:
  /// Scales inputs, centres targets, and maximizes the marginal likelihood by
  /// projected gradient ascent from several starts.
  static GpModel fit(const Matrix& x, const Vector& y, const GpFitOptions& options = {});
  /// Exact inference at fixed hyperparameters (no optimization).
  static GpModel with_hyperparameters(const Matrix& x, const Vector& y, const Vector& theta);

  /// Posterior predictive mean and variance (noise included).
  std::pair<Vector, Vector> predict(const Matrix& x) const;

  const Vector& theta() const { return theta_; }
  const FeatureScaler& scaler() const { return scaler_; }
  double y_mean() const { return y_mean_; }
  double log_marginal_likelihood() const { return lml_; }
  double initial_log_marginal_likelihood() const { return lml_init_; }

 private:
  void factorize();

  FeatureScaler scaler_;
  Matrix x_;  // scaled training inputs
  Vector y_;  // centred targets
  double y_mean_ = 0.0;
  Vector theta_;
  Matrix chol_;
  Vector alpha_;
  double lml_ = 0.0;
  double lml_init_ = 0.0;
};

struct TTest {
  double t = 0.0;
  double p = 1.0;
  bool flagged = false;  // zero-variance differences with nonzero mean
};

/// Two-sided paired t-test on per-row differences a - b.
TTest paired_t_test(const std::vector<double>& a, const std::vector<double>& b);

struct ModelResult {
  std::string method;
  double mse = 0.0;
  double nll = 0.0;
  double mse_delta = 0.0;  // vs full GP
  double nll_delta = 0.0;
  TTest mse_test;
  TTest nll_test;
  std::vector<double> sq_errors;
  std::vector<double> nlls;
};

/// GP, GP-D, GP-ESS, GP-G, GP-GR, linear regression and iid normal fitted on
/// `train`, scored on `test`. The GP fits run in parallel.
std::vector<ModelResult> evaluate_models(const MetaDataset& train, const MetaDataset& test,
                                         const GpFitOptions& options = {});

/// method, MSE, NLL, deltas and p columns.
std::string meta_results_csv(const std::vector<ModelResult>& results);
std::string meta_results_text(const std::vector<ModelResult>& results);

}  // namespace mcbench
