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
#include <ostream>

namespace mcbench {

/// Runs the built-in oracle checks (Kolmogorov constant, chi-square values,
/// normal quantile, ESSD reference value, AR(1) ESS), printing one PASS/FAIL
/// line each. Returns true when all pass.
bool run_selftest(std::ostream& out, std::uint64_t seed = 0);

}  // namespace mcbench
