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

#include "mcbench/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "mcbench/error.hpp"
#include "mcbench/special.hpp"

namespace mcbench {

namespace {

std::string cell(double x, const char* fmt = "%.4g") {
  if (std::isnan(x)) return "-";
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, x);
  return buf;
}

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
}

}  // namespace

ReportFormat report_format_from_string(const std::string& s) {
  if (s == "table-text" || s == "text") return ReportFormat::table_text;
  if (s == "delimited" || s == "csv") return ReportFormat::delimited;
  if (s == "both") return ReportFormat::both;
  throw ContractViolation("report format must be table-text, delimited or both");
}

std::string summary_table_text(const Summary& summary) {
  const EstimatorKind cols[] = {EstimatorKind::ks_d, EstimatorKind::mean_d, EstimatorKind::var_d};
  std::size_t width = 7;
  for (const auto& s : summary.samplers) width = std::max(width, s.sampler.size());
  std::ostringstream out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-*s | %10s %10s %10s | %10s %10s %10s\n", static_cast<int>(width),
                "sampler", "NESS KS", "NESS mu", "NESS var", "P KS", "P mu", "P var");
  out << buf << std::string(width + 72, '-') << '\n';
  for (const auto& s : summary.samplers) {
    std::string row[6];
    for (int i = 0; i < 3; ++i) {
      const auto it = s.kinds.find(cols[i]);
      row[i] = it == s.kinds.end() ? "-" : cell(it->second.mean_ness);
      row[i + 3] = it == s.kinds.end() ? "-" : cell(it->second.success_prob, "%.3f");
    }
    std::snprintf(buf, sizeof buf, "%-*s | %10s %10s %10s | %10s %10s %10s\n",
                  static_cast<int>(width), s.sampler.c_str(), row[0].c_str(), row[1].c_str(),
                  row[2].c_str(), row[3].c_str(), row[4].c_str(), row[5].c_str());
    out << buf;
  }
  out << "checkpoint " << summary.checkpoint << "; P = fraction of rows with RESS >= 12\n";
  return out.str();
}

std::string summary_csv(const Summary& summary) {
  std::ostringstream out;
  out << "sampler,kind,rows,successes,success_prob,mean_ness,ness_q1,ness_q2,ness_q3,eff_q1,eff_q2,"
         "eff_q3\n";
  for (const auto& s : summary.samplers) {
    for (const auto& [kind, k] : s.kinds) {
      out << s.sampler << ',' << to_string(kind) << ',' << k.rows << ',' << k.successes << ','
          << num(k.success_prob) << ',' << num(k.mean_ness);
      for (double q : k.ness_quartiles) out << ',' << num(q);
      for (double q : k.eff_quartiles) out << ',' << num(q);
      out << '\n';
    }
  }
  return out.str();
}

std::string calibration_csv(const ScoreTable& table, double level) {
  std::map<std::string, int> dims;
  for (const auto& r : table) dims[r.example] = std::max(dims[r.example], r.dim + 1);
  const double lo_p = 0.5 * (1.0 - level);
  const double hi_p = 1.0 - lo_p;
  std::map<int, std::pair<double, double>> q;
  std::ostringstream out;
  out << "example,sampler,checkpoint,kind,dim,chains,dof,ess,ress,band_lo,band_hi,inside\n";
  for (const auto& r : table) {
    if (r.absent || r.chains < 1) continue;
    const int m = is_multivariate(r.kind) ? r.chains * dims[r.example] : r.chains;
    if (!q.count(m)) q[m] = {chi2_quantile(lo_p, m), chi2_quantile(hi_p, m)};
    const double lo = m * r.ess / q[m].second;
    const double hi = m * r.ess / q[m].first;
    const bool inside = r.ress >= lo && r.ress <= hi;
    out << r.example << ',' << r.sampler << ',' << r.checkpoint << ',' << to_string(r.kind) << ','
        << r.dim << ',' << r.chains << ',' << m << ',' << num(r.ess) << ',' << num(r.ress) << ','
        << num(lo) << ',' << num(hi) << ',' << int(inside) << '\n';
  }
  return out.str();
}

void emit_report(const Summary& summary, const ScoreTable& table, const std::filesystem::path& dir,
                 ReportFormat format) {
  std::filesystem::create_directories(dir);
  if (format != ReportFormat::delimited) write(dir / "report.txt", summary_table_text(summary));
  if (format != ReportFormat::table_text) {
    write(dir / "summary.csv", summary_csv(summary));
    write(dir / "calibration.csv", calibration_csv(table));
    write_score_table(table, dir / "scores.csv");
  }
}

}  // namespace mcbench
