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

#include "mcbench/selftest.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "mcbench/diagnostics.hpp"
#include "mcbench/metrics.hpp"
#include "mcbench/rng.hpp"
#include "mcbench/special.hpp"

namespace mcbench {

bool run_selftest(std::ostream& out, std::uint64_t seed) {
  bool all = true;
  auto check = [&](const std::string& name, double got, double want, double tol) {
    const bool ok = std::abs(got - want) <= tol;
    all = all && ok;
    out << (ok ? "PASS " : "FAIL ") << name << ": got " << got << ", want " << want << " +- " << tol
        << '\n';
  };
  out.precision(10);
  check("kolmogorov constant vs quadrature", kKolmogorovR, kolmogorov_second_moment_numeric(), 1e-3);
  check("kolmogorov constant vs 0.822", kKolmogorovR, 0.822, 5e-4);
  // Even dof: P(4, 4) = 1 - e^-4 (1 + 4 + 8 + 32/3).
  check("chi2_8 cdf(8)", chi2_cdf(8.0, 8.0), 1.0 - std::exp(-4.0) * 71.0 / 3.0, 1e-12);
  check("chi2_2 cdf(3)", chi2_cdf(3.0, 2.0), 1.0 - std::exp(-1.5), 1e-12);
  check("normal quantile 0.5", normal_inv_cdf(0.5), 0.0, 1e-12);
  check("normal quantile 0.975", normal_inv_cdf(0.975), 1.959963984540054, 1e-9);
  check("ESSD at ESS = RESS, K = 8", essd(100.0, 100.0, 8).value, 0.16750, 5e-4);

  // AR(1) with phi = 0.5: tau = (1 + phi) / (1 - phi) = 3.
  Rng rng(seed);
  const std::size_t n = 200000;
  std::vector<double> x(n);
  x[0] = standard_normal(rng) / std::sqrt(1.0 - 0.25);
  for (std::size_t i = 1; i < n; ++i) x[i] = 0.5 * x[i - 1] + standard_normal(rng);
  check("AR(1) ESS / (N/3)", ess(x) / (static_cast<double>(n) / 3.0), 1.0, 0.1);

  out << (all ? "selftest: all checks passed" : "selftest: FAILURES") << '\n';
  return all;
}

}  // namespace mcbench
