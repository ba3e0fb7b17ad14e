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

#include <filesystem>
#include <string>

#include "mcbench/harness.hpp"

namespace mcbench {

enum class ReportFormat { table_text, delimited, both };

ReportFormat report_format_from_string(const std::string& s);

/// Sampler x {NESS, P(RESS >= 12)} x {KS, mean, variance}, one line per
/// sampler, averaged over dimensions and examples at the final checkpoint.
std::string summary_table_text(const Summary& summary);

/// Flat version of the summary: one line per (sampler, estimator kind).
std::string summary_csv(const Summary& summary);

/// ESS vs RESS pairs with the iid band RESS in [m ESS / q_hi, m ESS / q_lo]
/// where m = K (univariate) or K D (multivariate) and q are chi2_m quantiles
/// at (1 -+ level) / 2.
std::string calibration_csv(const ScoreTable& table, double level = 0.95);

/// Writes report.txt and/or summary.csv, scores.csv, calibration.csv.
void emit_report(const Summary& summary, const ScoreTable& table,
                 const std::filesystem::path& dir, ReportFormat format);

}  // namespace mcbench
