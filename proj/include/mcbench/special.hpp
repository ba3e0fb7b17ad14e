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

namespace mcbench {

double normal_cdf(double z);
/// Standard normal quantile; p must lie in (0, 1).
double normal_inv_cdf(double p);

/// Regularized lower incomplete gamma P(k/2, x/2).
double chi2_cdf(double x, double dof);
double chi2_quantile(double p, double dof);

double students_t_cdf(double t, double dof);

/// Limiting CDF of sqrt(N) * KS for a continuous target.
double kolmogorov_cdf(double k);
/// Two-sided KS critical value for `n` iid samples at level `alpha`.
double kolmogorov_critical_value(double alpha, std::size_t n);

}  // namespace mcbench
