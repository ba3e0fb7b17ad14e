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

#include "mcbench/special.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <boost/math/tools/roots.hpp>

#include "mcbench/error.hpp"

namespace mcbench {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_inv_cdf(double p) {
  if (!(p > 0.0 && p < 1.0)) throw ContractViolation("normal_inv_cdf: p must lie in (0, 1)");
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

double chi2_cdf(double x, double dof) {
  if (!(dof > 0.0)) throw ContractViolation("chi2_cdf: degrees of freedom must be positive");
  if (std::isnan(x) || x < 0.0) throw ContractViolation("chi2_cdf: x must be >= 0");
  if (std::isinf(x)) return 1.0;
  return boost::math::cdf(boost::math::chi_squared_distribution<double>(dof), x);
}

double chi2_quantile(double p, double dof) {
  if (!(p > 0.0 && p < 1.0)) throw ContractViolation("chi2_quantile: p must lie in (0, 1)");
  return boost::math::quantile(boost::math::chi_squared_distribution<double>(dof), p);
}

double students_t_cdf(double t, double dof) {
  if (!(dof > 0.0)) throw ContractViolation("students_t_cdf: dof must be positive");
  if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
  return boost::math::cdf(boost::math::students_t_distribution<double>(dof), t);
}

double kolmogorov_cdf(double k) {
  if (k <= 0.0) return 0.0;
  constexpr double pi2 = std::numbers::pi * std::numbers::pi;
  if (k < 1.0) {
    // Jacobi-theta form; converges fast for small k.
    double s = 0.0;
    for (int j = 1; j <= 50; ++j) {
      const double t = std::exp(-(2.0 * j - 1) * (2.0 * j - 1) * pi2 / (8.0 * k * k));
      s += t;
      if (t < 1e-18 * s) break;
    }
    return std::sqrt(2.0 * std::numbers::pi) / k * s;
  }
  double s = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double t = std::exp(-2.0 * j * j * k * k);
    s += (j % 2 ? 1.0 : -1.0) * t;
    if (t < 1e-18) break;
  }
  return 1.0 - 2.0 * s;
}

double kolmogorov_critical_value(double alpha, std::size_t n) {
  if (!(alpha > 0.0 && alpha < 1.0) || n == 0) {
    throw ContractViolation("kolmogorov_critical_value: bad alpha or n");
  }
  auto f = [alpha](double k) { return 1.0 - kolmogorov_cdf(k) - alpha; };
  boost::math::tools::eps_tolerance<double> tol(50);
  std::uintmax_t iters = 200;
  auto [lo, hi] = boost::math::tools::toms748_solve(f, 0.2, 5.0, tol, iters);
  return 0.5 * (lo + hi) / std::sqrt(static_cast<double>(n));
}

}  // namespace mcbench
