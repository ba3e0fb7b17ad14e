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

#include <cstddef>
#include <span>
#include <vector>

namespace mcbench {

// Chain-only diagnostics: no ground truth is consulted here.

/// Biased (1/N) empirical autocovariance at lags 0..max_lag, via FFT.
/// A constant series yields an all-zero result.
std::vector<double> autocovariance(std::span<const double> series, std::size_t max_lag);

/// Integrated autocorrelation time 1 + 2 sum rho_k, truncated by Geyer's
/// initial monotone positive sequence. NaN for a constant series.
double integrated_autocorrelation_time(std::span<const double> series);

inline constexpr double kEssFloor = 1e-3;

/// N / tau, clamped to [1e-3, N]. A constant series returns the floor.
double ess(std::span<const double> series);

/// Sum of per-chain ESS.
double ess_multichain(const std::vector<std::span<const double>>& chains);

/// Potential scale reduction without chain splitting. Chains must have equal
/// length >= 4 and there must be at least two. Returns +inf when the
/// within-chain variance vanishes but the chain means differ, 1 when both
/// vanish.
double gelman_rubin(const std::vector<std::span<const double>>& chains);

/// Geweke z-score between the first `frac_a` and last `frac_b` of the
/// series. Segment-mean variances use spectral density at zero. NaN when a
/// segment is degenerate.
double geweke(std::span<const double> series, double frac_a = 0.1, double frac_b = 0.5);

/// Stouffer combination sum(z_k)/sqrt(K) of per-chain Geweke scores; NaN
/// entries are skipped.
double geweke_combined(const std::vector<double>& per_chain_z);

/// Diagnostics of one chain set, one entry per dimension.
struct DiagnosticsRecord {
  std::vector<double> ess;           // summed over chains
  std::vector<double> ess_per_chain; // mean per-chain ESS
  std::vector<double> gelman_rubin;
  std::vector<double> geweke_z;      // combined over chains
  std::vector<std::size_t> n_per_chain;
  int chains = 0;
};

}  // namespace mcbench
