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

#include "mcbench/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>

#include <unsupported/Eigen/FFT>

#include "mcbench/error.hpp"

namespace mcbench {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double mean_of(std::span<const double> x) {
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// Geyer initial monotone sequence on autocovariances; returns tau.
double geyer_tau(const std::vector<double>& acov) {
  const std::size_t n = acov.size();
  const double v0 = acov[0];
  double sum = 0.0;
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; 2 * m + 1 < n; ++m) {
    double pair = (acov[2 * m] + acov[2 * m + 1]) / v0;
    if (!(pair > 0.0)) break;
    pair = std::min(pair, prev);
    prev = pair;
    sum += pair;
  }
  return -1.0 + 2.0 * sum;
}

}  // namespace

std::vector<double> autocovariance(std::span<const double> series, std::size_t max_lag) {
  const std::size_t n = series.size();
  if (n < 4) throw ContractViolation("autocovariance: need at least 4 points");
  max_lag = std::min(max_lag, n - 1);
  const double mu = mean_of(series);
  const std::size_t m = next_pow2(2 * n);
  std::vector<double> padded(m, 0.0);
  for (std::size_t i = 0; i < n; ++i) padded[i] = series[i] - mu;
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> freq;
  fft.fwd(freq, padded);
  for (auto& f : freq) f = std::complex<double>(std::norm(f), 0.0);
  std::vector<double> back;
  fft.inv(back, freq);
  std::vector<double> out(max_lag + 1);
  for (std::size_t k = 0; k <= max_lag; ++k) out[k] = back[k] / static_cast<double>(n);
  if (out[0] <= 0.0 || !std::isfinite(out[0])) std::fill(out.begin(), out.end(), 0.0);
  return out;
}

double integrated_autocorrelation_time(std::span<const double> series) {
  const auto acov = autocovariance(series, series.size() - 1);
  if (acov[0] <= 0.0) return kNaN;
  return geyer_tau(acov);
}

double ess(std::span<const double> series) {
  const std::size_t n = series.size();
  if (n < 8) throw ContractViolation("ess: need at least 8 points");
  const double tau = integrated_autocorrelation_time(series);
  if (std::isnan(tau)) return kEssFloor;
  const double nd = static_cast<double>(n);
  if (!(tau > 0.0)) return nd;
  return std::clamp(nd / tau, kEssFloor, nd);
}

double ess_multichain(const std::vector<std::span<const double>>& chains) {
  if (chains.empty()) throw ContractViolation("ess_multichain: no chains");
  double total = 0.0;
  for (const auto& c : chains) total += ess(c);
  return total;
}

double gelman_rubin(const std::vector<std::span<const double>>& chains) {
  const std::size_t k = chains.size();
  if (k < 2) throw ContractViolation("gelman_rubin: need at least two chains");
  const std::size_t n = chains[0].size();
  if (n < 4) throw ContractViolation("gelman_rubin: chains need at least 4 points");
  std::vector<double> means(k), vars(k);
  for (std::size_t c = 0; c < k; ++c) {
    if (chains[c].size() != n) throw ContractViolation("gelman_rubin: chains differ in length");
    means[c] = mean_of(chains[c]);
    double ss = 0.0;
    for (double x : chains[c]) ss += (x - means[c]) * (x - means[c]);
    vars[c] = ss / static_cast<double>(n - 1);
  }
  const double w = std::accumulate(vars.begin(), vars.end(), 0.0) / static_cast<double>(k);
  const double grand = std::accumulate(means.begin(), means.end(), 0.0) / static_cast<double>(k);
  double bm = 0.0;
  for (double m : means) bm += (m - grand) * (m - grand);
  const double nd = static_cast<double>(n);
  const double b = nd * bm / static_cast<double>(k - 1);
  if (w == 0.0) return b > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
  return std::sqrt(((nd - 1.0) / nd * w + b / nd) / w);
}

double geweke(std::span<const double> series, double frac_a, double frac_b) {
  const std::size_t n = series.size();
  if (n < 100) throw ContractViolation("geweke: need at least 100 points");
  if (!(frac_a > 0.0 && frac_b > 0.0 && frac_a + frac_b <= 1.0)) {
    throw ContractViolation("geweke: segment fractions must be positive and sum to <= 1");
  }
  const auto na = static_cast<std::size_t>(std::floor(frac_a * static_cast<double>(n)));
  const auto nb = static_cast<std::size_t>(std::floor(frac_b * static_cast<double>(n)));
  const auto a = series.first(na);
  const auto b = series.last(nb);
  auto mean_var = [](std::span<const double> seg) {
    const auto acov = autocovariance(seg, seg.size() - 1);
    if (acov[0] <= 0.0) return kNaN;
    const double tau = std::max(geyer_tau(acov), 0.0);
    return acov[0] * tau / static_cast<double>(seg.size());
  };
  const double va = mean_var(a);
  const double vb = mean_var(b);
  const double denom = std::sqrt(va + vb);
  if (!(denom > 0.0)) return kNaN;
  return (mean_of(a) - mean_of(b)) / denom;
}

double geweke_combined(const std::vector<double>& per_chain_z) {
  double sum = 0.0;
  int used = 0;
  for (double z : per_chain_z) {
    if (std::isnan(z)) continue;
    sum += z;
    ++used;
  }
  return used ? sum / std::sqrt(static_cast<double>(used)) : kNaN;
}

}  // namespace mcbench
