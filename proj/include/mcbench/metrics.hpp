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
#include <functional>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "mcbench/density.hpp"

namespace mcbench {

enum class EstimatorKind { mean_d, var_d, ks_d, mean_mv, var_mv };

std::string to_string(EstimatorKind kind);
EstimatorKind estimator_kind_from_string(const std::string& s);
bool is_multivariate(EstimatorKind kind);

/// Limit of E[N * KS^2] for iid samples: the second moment of the Kolmogorov
/// distribution, pi^2 / 12.
inline constexpr double kKolmogorovR = std::numbers::pi * std::numbers::pi / 12.0;

/// Normalizing constant R making RESS tend to N under iid sampling:
/// 1 for means, 2 for variances, pi^2/12 for KS.
double r_constant(EstimatorKind kind);

/// Second moment of the Kolmogorov distribution by quadrature of
/// 2k (1 - K(k)). Used to check kKolmogorovR.
double kolmogorov_second_moment_numeric();

/// Exact draws from a target with cached per-dimension mean and (population)
/// standard deviation. Standardization uses these sample statistics, not the
/// analytic moments.
struct GroundTruth {
  Matrix samples;
  Vector mean;
  Vector std;
  std::uint64_t seed = 0;

  static GroundTruth from_samples(Matrix samples, std::uint64_t seed = 0);
};

GroundTruth generate_ground_truth(const BenchmarkDensity& density, std::size_t n,
                                  std::uint64_t seed);

/// (x - mean) / std per column, statistics taken from `truth`.
Matrix standardize_by_ground_truth(const Matrix& samples, const GroundTruth& truth);

/// R K / sum_k (est_k - truth)^2; +inf when every estimate is exact.
double ress(std::span<const double> estimates, double truth, double r);

/// R K D / sum_k ||est_k - truth||^2; +inf when every estimate is exact.
double ress_multivariate(const std::vector<Vector>& estimates, const Vector& truth, double r);

/// Exact sup |F_hat - F| evaluated at the jump points. `sorted` must be
/// ascending.
double ks_statistic_sorted(std::span<const double> sorted, const std::function<double(double)>& cdf);
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

/// KS-based RESS on marginal `d`, R = pi^2/12.
double ress_ks(const std::vector<std::vector<double>>& chains, const BenchmarkDensity& density,
               int d);

double harmonic_mean(std::span<const double> values);

/// RESS / harmonic mean of per-chain lengths.
double eff(double ress_value, std::span<const std::size_t> n_per_chain);

/// RESS / median over samplers of their sample counts on the same example.
double ness(double ress_value, std::vector<double> per_sampler_n);

inline constexpr double kEssdClamp = 8.0;

struct Essd {
  double value;
  bool flagged;  // clamped or derived from an infinite RESS
};

/// Phi^{-1}(chi2_K CDF(K * ESS / RESS)), clamped to [-8, 8].
Essd essd(double ess_value, double ress_value, int k);

inline constexpr double kSuccessThreshold = 12.0;

/// RESS >= 12; an infinite RESS counts as success.
inline bool success(double ress_value) { return ress_value >= kSuccessThreshold; }

}  // namespace mcbench
