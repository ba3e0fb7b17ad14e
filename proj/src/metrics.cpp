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

#include "mcbench/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mcbench/error.hpp"
#include "mcbench/special.hpp"

namespace mcbench {
namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

std::string to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::mean_d: return "mean_d";
    case EstimatorKind::var_d: return "var_d";
    case EstimatorKind::ks_d: return "ks_d";
    case EstimatorKind::mean_mv: return "mean_mv";
    case EstimatorKind::var_mv: return "var_mv";
  }
  return "?";
}

EstimatorKind estimator_kind_from_string(const std::string& s) {
  for (auto k : {EstimatorKind::mean_d, EstimatorKind::var_d, EstimatorKind::ks_d,
                 EstimatorKind::mean_mv, EstimatorKind::var_mv}) {
    if (to_string(k) == s) return k;
  }
  throw ContractViolation("unknown estimator kind '" + s + "'");
}

bool is_multivariate(EstimatorKind kind) {
  return kind == EstimatorKind::mean_mv || kind == EstimatorKind::var_mv;
}

double r_constant(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::mean_d:
    case EstimatorKind::mean_mv: return 1.0;
    case EstimatorKind::var_d:
    case EstimatorKind::var_mv: return 2.0;
    case EstimatorKind::ks_d: return kKolmogorovR;
  }
  return 1.0;
}

double kolmogorov_second_moment_numeric() {
  // E[K^2] = int_0^inf 2k (1 - F(k)) dk; the tail beyond k = 6 is < 1e-30.
  constexpr int n = 6000;
  constexpr double hi = 6.0;
  const double h = hi / n;
  auto f = [](double k) { return 2.0 * k * (1.0 - kolmogorov_cdf(k)); };
  double s = f(0.0) + f(hi);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(i * h);
  return s * h / 3.0;
}

GroundTruth GroundTruth::from_samples(Matrix samples, std::uint64_t seed) {
  if (samples.rows() < 2) throw ContractViolation("ground truth needs at least two samples");
  GroundTruth gt;
  gt.mean = samples.colwise().mean().transpose();
  gt.std = ((samples.rowwise() - gt.mean.transpose()).array().square().colwise().mean())
               .sqrt()
               .transpose();
  gt.samples = std::move(samples);
  gt.seed = seed;
  return gt;
}

GroundTruth generate_ground_truth(const BenchmarkDensity& density, std::size_t n,
                                  std::uint64_t seed) {
  Rng rng(seed);
  return GroundTruth::from_samples(density.sample_exact(n, rng), seed);
}

Matrix standardize_by_ground_truth(const Matrix& samples, const GroundTruth& truth) {
  if (samples.cols() != truth.mean.size()) {
    throw ContractViolation("standardize: dimension mismatch");
  }
  if (truth.std.minCoeff() <= 0.0) throw ContractViolation("standardize: zero ground-truth variance");
  return ((samples.rowwise() - truth.mean.transpose()).array().rowwise() /
          truth.std.transpose().array())
      .matrix();
}

double ress(std::span<const double> estimates, double truth, double r) {
  if (estimates.empty()) throw ContractViolation("ress: need at least one estimate");
  double ss = 0.0;
  for (double e : estimates) ss += (e - truth) * (e - truth);
  if (ss == 0.0) return kInf;
  return r * static_cast<double>(estimates.size()) / ss;
}

double ress_multivariate(const std::vector<Vector>& estimates, const Vector& truth, double r) {
  if (estimates.empty()) throw ContractViolation("ress_multivariate: need at least one estimate");
  double ss = 0.0;
  for (const auto& e : estimates) {
    if (e.size() != truth.size()) throw ContractViolation("ress_multivariate: dimension mismatch");
    ss += (e - truth).squaredNorm();
  }
  if (ss == 0.0) return kInf;
  return r * static_cast<double>(estimates.size()) * static_cast<double>(truth.size()) / ss;
}

double ks_statistic_sorted(std::span<const double> sorted, const std::function<double(double)>& cdf) {
  const std::size_t n = sorted.size();
  if (n == 0) throw ContractViolation("ks_statistic: empty sample");
  const double nd = static_cast<double>(n);
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = cdf(sorted[i]);
    d = std::max({d, static_cast<double>(i + 1) / nd - f, f - static_cast<double>(i) / nd});
  }
  return d;
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
  std::sort(samples.begin(), samples.end());
  return ks_statistic_sorted(samples, cdf);
}

double ress_ks(const std::vector<std::vector<double>>& chains, const BenchmarkDensity& density,
               int d) {
  if (chains.empty()) throw ContractViolation("ress_ks: need at least one chain");
  const auto cdf = [&](double a) { return density.marginal_cdf(d, a); };
  std::vector<double> ks;
  ks.reserve(chains.size());
  for (const auto& c : chains) ks.push_back(ks_statistic(c, cdf));
  return ress(ks, 0.0, kKolmogorovR);
}

double harmonic_mean(std::span<const double> values) {
  if (values.empty()) throw ContractViolation("harmonic_mean: empty input");
  double s = 0.0;
  for (double v : values) {
    if (!(v > 0.0)) throw ContractViolation("harmonic_mean: values must be positive");
    s += 1.0 / v;
  }
  return static_cast<double>(values.size()) / s;
}

double eff(double ress_value, std::span<const std::size_t> n_per_chain) {
  std::vector<double> n(n_per_chain.begin(), n_per_chain.end());
  return ress_value / harmonic_mean(n);
}

double ness(double ress_value, std::vector<double> per_sampler_n) {
  if (per_sampler_n.empty()) throw ContractViolation("ness: empty sampler set");
  std::sort(per_sampler_n.begin(), per_sampler_n.end());
  const std::size_t m = per_sampler_n.size();
  const double med = m % 2 ? per_sampler_n[m / 2]
                           : 0.5 * (per_sampler_n[m / 2 - 1] + per_sampler_n[m / 2]);
  return ress_value / med;
}

Essd essd(double ess_value, double ress_value, int k) {
  if (k < 1) throw ContractViolation("essd: K must be >= 1");
  if (!(ess_value > 0.0)) throw ContractViolation("essd: ESS must be positive");
  if (std::isinf(ress_value)) return {-kEssdClamp, true};
  if (!(ress_value > 0.0)) throw ContractViolation("essd: RESS must be positive");
  const double p = chi2_cdf(ess_value / ress_value * k, k);
  if (!(p > 0.0)) return {-kEssdClamp, true};
  if (!(p < 1.0)) return {kEssdClamp, true};
  const double z = normal_inv_cdf(p);
  if (z > kEssdClamp) return {kEssdClamp, true};
  if (z < -kEssdClamp) return {-kEssdClamp, true};
  return {z, false};
}

}  // namespace mcbench
