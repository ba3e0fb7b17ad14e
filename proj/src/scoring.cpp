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

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mcbench/error.hpp"
#include "mcbench/harness.hpp"

namespace mcbench {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Every row of one (example, sampler, checkpoint).
std::vector<ScoreRow> score_checkpoint(const Example& ex, const std::string& sampler,
                                       const std::vector<const Chain*>& all, int checkpoint) {
  const int dim = ex.density->dim();
  std::vector<const Chain*> usable;
  std::vector<std::size_t> prefix;
  for (const Chain* c : all) {
    if (c->failed || static_cast<int>(c->checkpoints.size()) < checkpoint) continue;
    const std::size_t n = c->checkpoints[checkpoint - 1].samples;
    if (n < kMinScoredSamples) continue;
    usable.push_back(c);
    prefix.push_back(n);
  }

  std::vector<ScoreRow> rows;
  auto add = [&](EstimatorKind kind, int d) -> ScoreRow& {
    ScoreRow r;
    r.example = ex.id;
    r.sampler = sampler;
    r.checkpoint = checkpoint;
    r.kind = kind;
    r.dim = d;
    r.chains = static_cast<int>(usable.size());
    rows.push_back(r);
    return rows.back();
  };
  const EstimatorKind uni[] = {EstimatorKind::mean_d, EstimatorKind::var_d, EstimatorKind::ks_d};
  const EstimatorKind multi[] = {EstimatorKind::mean_mv, EstimatorKind::var_mv};

  if (usable.empty()) {
    for (int d = 0; d < dim; ++d) {
      for (auto k : uni) {
        ScoreRow& r = add(k, d);
        r.absent = true;
        r.ress = r.eff = r.ness = r.essd = r.ess = r.gelman_rubin = r.geweke = kNaN;
      }
    }
    for (auto k : multi) {
      ScoreRow& r = add(k, -1);
      r.absent = true;
      r.ress = r.eff = r.ness = r.essd = r.ess = r.gelman_rubin = r.geweke = kNaN;
    }
    return rows;
  }

  const DiagnosticsRecord diag = diagnose(usable, prefix);
  const int k = static_cast<int>(usable.size());
  std::vector<double> nd(prefix.begin(), prefix.end());
  const double n_h = harmonic_mean(nd);

  std::vector<Vector> means, vars;
  std::vector<Matrix> raw;
  for (std::size_t c = 0; c < usable.size(); ++c) {
    raw.push_back(usable[c]->prefix(prefix[c]));
    const Matrix z = standardize_by_ground_truth(raw.back(), ex.truth);
    const Vector m = z.colwise().mean().transpose();
    means.push_back(m);
    vars.push_back((z.rowwise() - m.transpose()).array().square().colwise().mean().transpose());
  }

  auto finish = [&](ScoreRow& r, double ress_value, double ess_value, int dof) {
    r.n_harmonic = n_h;
    r.ress = ress_value;
    r.eff = eff(ress_value, prefix);
    r.success = success(ress_value);
    r.ess = ess_value;
    const Essd e = essd(ess_value, ress_value, dof);
    r.essd = e.value;
    r.essd_flagged = e.flagged;
  };

  for (int d = 0; d < dim; ++d) {
    std::vector<double> em(k), ev(k);
    std::vector<std::vector<double>> cols(k);
    for (int c = 0; c < k; ++c) {
      em[c] = means[c][d];
      ev[c] = vars[c][d];
      cols[c].assign(raw[c].col(d).data(), raw[c].col(d).data() + raw[c].rows());
    }
    const double ess_d = diag.ess_per_chain[d];
    const double values[] = {ress(em, 0.0, r_constant(EstimatorKind::mean_d)),
                             ress(ev, 1.0, r_constant(EstimatorKind::var_d)),
                             ress_ks(cols, *ex.density, d)};
    for (int i = 0; i < 3; ++i) {
      ScoreRow& r = add(uni[i], d);
      finish(r, values[i], ess_d, k);
      r.gelman_rubin = diag.gelman_rubin[d];
      r.geweke = diag.geweke_z[d];
    }
  }

  double ess_mean = 0.0, gr_max = kNaN, gz = kNaN;
  for (int d = 0; d < dim; ++d) {
    ess_mean += diag.ess_per_chain[d] / dim;
    const double gr = diag.gelman_rubin[d];
    if (!std::isnan(gr) && (std::isnan(gr_max) || gr > gr_max)) gr_max = gr;
    const double z = diag.geweke_z[d];
    if (!std::isnan(z) && (std::isnan(gz) || std::abs(z) > std::abs(gz))) gz = z;
  }
  const Vector zeros = Vector::Zero(dim), ones = Vector::Ones(dim);
  const double mv[] = {ress_multivariate(means, zeros, r_constant(EstimatorKind::mean_mv)),
                       ress_multivariate(vars, ones, r_constant(EstimatorKind::var_mv))};
  for (int i = 0; i < 2; ++i) {
    ScoreRow& r = add(multi[i], -1);
    // Summed squared error over K chains and D dimensions: K*D degrees of freedom.
    finish(r, mv[i], ess_mean, k * dim);
    r.gelman_rubin = gr_max;
    r.geweke = gz;
  }
  return rows;
}

double quantile_sorted(const std::vector<double>& v, double q) {
  if (v.empty()) return kNaN;
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

std::vector<double> quartiles(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return {quantile_sorted(v, 0.25), quantile_sorted(v, 0.5), quantile_sorted(v, 0.75)};
}

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::ostringstream s;
  s.precision(17);
  s << x;
  return s.str();
}

double parse_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw IoError("score table: bad number '" + s + "'");
  return v;
}

}  // namespace

ScoreTable score_runs(const RunArtifacts& art, Exec exec) {
  struct Task {
    const Example* ex;
    const SamplerSpec* spec;
    int checkpoint;
  };
  std::vector<Task> tasks;
  for (const auto& ex : art.examples) {
    for (const auto& spec : art.config.samplers) {
      for (int j = 1; j <= art.config.checkpoints; ++j) tasks.push_back({&ex, &spec, j});
    }
  }
  std::vector<std::vector<ScoreRow>> out(tasks.size());
  auto run = [&](std::size_t t) {
    const Task& task = tasks[t];
    out[t] = score_checkpoint(*task.ex, task.spec->name,
                              art.chains_of(task.ex->id, task.spec->name), task.checkpoint);
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::size_t t = 0; t < tasks.size(); ++t) run(t);
  } else {
    for (std::size_t t = 0; t < tasks.size(); ++t) run(t);
  }
  ScoreTable table;
  for (auto& rows : out) table.insert(table.end(), rows.begin(), rows.end());
  assign_ness(table);
  return table;
}

void assign_ness(ScoreTable& table) {
  std::map<std::pair<std::string, int>, std::map<std::string, double>> n_by_sampler;
  for (const auto& r : table) {
    if (!r.absent) n_by_sampler[{r.example, r.checkpoint}][r.sampler] = r.n_harmonic;
  }
  for (auto& r : table) {
    if (r.absent) {
      r.ness = kNaN;
      continue;
    }
    std::vector<double> ns;
    for (const auto& [name, n] : n_by_sampler.at({r.example, r.checkpoint})) ns.push_back(n);
    r.ness = ness(r.ress, ns);
  }
}

std::string score_table_to_csv(const ScoreTable& table) {
  std::ostringstream out;
  out << "example,sampler,checkpoint,kind,dim,chains,n_harmonic,ress,eff,ness,essd,essd_flagged,"
         "success,absent,ess,gelman_rubin,geweke\n";
  for (const auto& r : table) {
    out << r.example << ',' << r.sampler << ',' << r.checkpoint << ',' << to_string(r.kind) << ','
        << r.dim << ',' << r.chains << ',' << fmt(r.n_harmonic) << ',' << fmt(r.ress) << ','
        << fmt(r.eff) << ',' << fmt(r.ness) << ',' << fmt(r.essd) << ',' << int(r.essd_flagged)
        << ',' << int(r.success) << ',' << int(r.absent) << ',' << fmt(r.ess) << ','
        << fmt(r.gelman_rubin) << ',' << fmt(r.geweke) << '\n';
  }
  return out.str();
}

ScoreTable score_table_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("example,sampler,checkpoint", 0) != 0) {
    throw IoError("score table: missing header");
  }
  ScoreTable table;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    if (f.size() != 17) throw IoError("score table: expected 17 fields, got " + std::to_string(f.size()));
    ScoreRow r;
    r.example = f[0];
    r.sampler = f[1];
    r.checkpoint = std::stoi(f[2]);
    r.kind = estimator_kind_from_string(f[3]);
    r.dim = std::stoi(f[4]);
    r.chains = std::stoi(f[5]);
    r.n_harmonic = parse_double(f[6]);
    r.ress = parse_double(f[7]);
    r.eff = parse_double(f[8]);
    r.ness = parse_double(f[9]);
    r.essd = parse_double(f[10]);
    r.essd_flagged = f[11] == "1";
    r.success = f[12] == "1";
    r.absent = f[13] == "1";
    r.ess = parse_double(f[14]);
    r.gelman_rubin = parse_double(f[15]);
    r.geweke = parse_double(f[16]);
    table.push_back(std::move(r));
  }
  return table;
}

void write_score_table(const ScoreTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << score_table_to_csv(table);
}

ScoreTable read_score_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return score_table_from_csv(ss.str());
}

Summary summarize(const ScoreTable& table) {
  Summary s;
  for (const auto& r : table) s.checkpoint = std::max(s.checkpoint, r.checkpoint);
  std::vector<std::string> order;
  std::map<std::string, std::map<EstimatorKind, std::vector<const ScoreRow*>>> rows;
  for (const auto& r : table) {
    if (r.checkpoint != s.checkpoint) continue;
    if (!rows.count(r.sampler)) order.push_back(r.sampler);
    rows[r.sampler][r.kind].push_back(&r);
  }
  for (const auto& name : order) {
    SamplerSummary ss;
    ss.sampler = name;
    for (const auto& [kind, list] : rows[name]) {
      KindSummary ks;
      std::vector<double> ness_all, ness_ok, eff_ok;
      for (const ScoreRow* r : list) {
        if (r->absent) continue;
        ++ks.rows;
        if (std::isfinite(r->ress)) ness_all.push_back(r->ness);
        if (r->success) {
          ++ks.successes;
          if (std::isfinite(r->ress)) {
            ness_ok.push_back(r->ness);
            eff_ok.push_back(r->eff);
          }
        }
      }
      ks.success_prob = ks.rows ? static_cast<double>(ks.successes) / ks.rows : kNaN;
      double sum = 0.0;
      for (double v : ness_all) sum += v;
      ks.mean_ness = ness_all.empty() ? kNaN : sum / ness_all.size();
      ks.ness_quartiles = quartiles(ness_ok);
      ks.eff_quartiles = quartiles(eff_ok);
      ss.kinds[kind] = ks;
    }
    s.samplers.push_back(std::move(ss));
  }
  return s;
}

std::string summary_to_json(const Summary& s) {
  using nlohmann::json;
  auto num = [](double x) -> json { return std::isfinite(x) ? json(x) : json(nullptr); };
  auto arr = [&](const std::vector<double>& v) {
    json a = json::array();
    for (double x : v) a.push_back(num(x));
    return a;
  };
  json samplers = json::array();
  for (const auto& ss : s.samplers) {
    json kinds = json::object();
    for (const auto& [kind, ks] : ss.kinds) {
      kinds[to_string(kind)] = {{"rows", ks.rows},
                                {"successes", ks.successes},
                                {"success_prob", num(ks.success_prob)},
                                {"mean_ness", num(ks.mean_ness)},
                                {"ness_quartiles_given_success", arr(ks.ness_quartiles)},
                                {"eff_quartiles_given_success", arr(ks.eff_quartiles)}};
    }
    samplers.push_back({{"sampler", ss.sampler}, {"kinds", kinds}});
  }
  return json{{"checkpoint", s.checkpoint}, {"samplers", samplers}}.dump(2);
}

}  // namespace mcbench
