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

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mcbench/exec.hpp"
#include "mcbench/rng.hpp"

namespace mcbench {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Lower Cholesky factor of `cov`. On failure, retries with diagonal jitter
/// starting at 1e-9 * mean(diag) and growing x10 up to 1e-3 * mean(diag).
/// Throws NotPositiveDefinite when the ladder is exhausted.
Matrix cholesky_with_jitter(const Matrix& cov);

/// Gaussian mixture in a single coordinate system. Immutable once built.
class MixtureOfGaussians {
 public:
  /// Throws ContractViolation unless weights are positive and sum to one
  /// (1e-12), shapes agree and every factor is lower triangular with a
  /// strictly positive diagonal.
  MixtureOfGaussians(Vector weights, std::vector<Vector> means,
                     std::vector<Matrix> chol_factors);

  static MixtureOfGaussians from_covariances(Vector weights,
                                             std::vector<Vector> means,
                                             const std::vector<Matrix>& covs);

  int dim() const { return dim_; }
  int components() const { return static_cast<int>(weights_.size()); }
  const Vector& weights() const { return weights_; }
  const std::vector<Vector>& means() const { return means_; }
  const std::vector<Matrix>& chol_factors() const { return chol_; }
  Matrix covariance(int c) const;

  double log_density(const Vector& z) const;
  /// log density, with the gradient written to `grad` when non-null.
  double log_density(const Vector& z, Vector* grad) const;

  /// Per-component log(w_c) + log N(z | m_c, S_c), written to `out`.
  void component_log_densities(const Vector& z, Eigen::Ref<Vector> out) const;

  /// Row-block form: out(i, c) for every row i of `rows` (b x D).
  void component_log_densities_block(const Matrix& rows, Matrix& out) const;

  Vector mean() const;
  Vector variance() const;
  double marginal_cdf(int d, double a) const;

  /// One exact draw; the component index is returned through `component`.
  Vector sample(Rng& rng, int* component = nullptr) const;

 private:
  int dim_;
  Vector weights_;
  Vector log_weights_;
  std::vector<Vector> means_;
  std::vector<Matrix> chol_;
  Vector log_norm_;  // -D/2 log 2pi - sum log L_ii, per component
};

/// Batched log density of each row of `data`, evaluated in fixed row blocks.
/// The serial reference and the OpenMP loop over blocks write identical values.
void mixture_log_density_rows(const MixtureOfGaussians& mog,
                              const Matrix& data, Eigen::Ref<Vector> out,
                              Exec exec = Exec::parallel);

/// x = scale * z + shift, elementwise.
struct AffineTransform {
  Vector scale;
  Vector shift;

  static AffineTransform identity(int dim);
  void validate() const;
  int dim() const { return static_cast<int>(scale.size()); }
  Vector apply(const Vector& z) const;
  Vector invert(const Vector& x) const;
  double log_abs_det() const;
};

struct Moments {
  Vector mean;
  Vector var;
};

/// Benchmark target: a mixture living in standardized space, pushed to the
/// original scale by an affine map. This is the harness-side (private) face;
/// samplers only ever see a BlackBoxView.
class BenchmarkDensity {
 public:
  BenchmarkDensity(std::string name, MixtureOfGaussians core,
                   AffineTransform destandardize);

  const std::string& name() const { return name_; }
  int dim() const { return core_.dim(); }
  const MixtureOfGaussians& core() const { return core_; }
  const AffineTransform& destandardize() const { return transform_; }
  const Vector& ground_truth_mean() const { return moments_.mean; }
  const Vector& ground_truth_var() const { return moments_.var; }

  double log_density(const Vector& x) const;
  Vector grad_log_density(const Vector& x) const;
  Matrix sample_exact(std::size_t n, Rng& rng) const;
  double marginal_cdf(int d, double a) const;
  Moments true_moments() const { return moments_; }

 private:
  std::string name_;
  MixtureOfGaussians core_;
  AffineTransform transform_;
  Moments moments_;
};

inline Matrix sample_exact(const BenchmarkDensity& density, std::size_t n,
                           Rng& rng) {
  return density.sample_exact(n, rng);
}

/// The sampler-facing face of a BenchmarkDensity: log-density, gradient,
/// dimension and an evaluation counter. Nothing else about the target is
/// reachable through this type. One view per chain.
class BlackBoxView {
 public:
  /// `log_offset` is added to every log-density; tests use it to check that
  /// samplers do not depend on normalization.
  explicit BlackBoxView(std::shared_ptr<const BenchmarkDensity> density,
                        double log_offset = 0.0);

  BlackBoxView(const BlackBoxView&) = delete;
  BlackBoxView& operator=(const BlackBoxView&) = delete;

  double log_density(const Vector& x);
  Vector gradient(const Vector& x);
  int dim() const { return dim_; }
  std::uint64_t evaluations() const { return evaluations_.load(); }

  /// Calls beyond `max_total` evaluations raise BudgetExhausted and are not
  /// counted.
  void limit_evaluations(std::uint64_t max_total) { limit_ = max_total; }

 private:
  void check_input(const Vector& x) const;
  void charge();

  std::shared_ptr<const BenchmarkDensity> density_;
  double log_offset_;
  int dim_;
  std::atomic<std::uint64_t> evaluations_{0};
  std::uint64_t limit_ = UINT64_MAX;
};

inline double log_unnorm_density(BlackBoxView& view, const Vector& x) {
  return view.log_density(x);
}
inline Vector grad_log_density(BlackBoxView& view, const Vector& x) {
  return view.gradient(x);
}

// Density files: structured text with fields name, dim, weights, means,
// chol_factors, scale, shift. Numbers are written with 17 significant digits.
void save_density(const BenchmarkDensity& density,
                  const std::filesystem::path& path);
BenchmarkDensity load_density(const std::filesystem::path& path);
std::string density_to_text(const BenchmarkDensity& density);
BenchmarkDensity density_from_text(const std::string& text);

/// Names of the densities shipped with the library.
std::vector<std::string> bundled_density_names();
BenchmarkDensity bundled_density(const std::string& name);

/// Bundled name or path to a density file.
BenchmarkDensity resolve_density(const std::string& name_or_path);

}  // namespace mcbench
