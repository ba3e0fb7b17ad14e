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

#include "mcbench/harness.hpp"

#include <time.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mcbench/error.hpp"

namespace mcbench {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double thread_cpu_seconds() {
  timespec ts{};
  clock_gettime(CLOCK_THREAD_CPUTIME_ID, &ts);
  return static_cast<double>(ts.tv_sec) + 1e-9 * static_cast<double>(ts.tv_nsec);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
}

std::filesystem::path chain_stem(const std::filesystem::path& dir, const Chain& c) {
  return dir / "chains" / c.example / c.sampler / ("chain_" + std::to_string(c.index));
}

}  // namespace

Chain run_chain(std::shared_ptr<const BenchmarkDensity> density, const std::string& example,
                const SamplerSpec& spec, const RunConfig& config, int chain_index) {
  Chain chain;
  chain.example = example;
  chain.sampler = spec.name;
  chain.index = chain_index;
  chain.seed = chain_seed(config.seed, example, spec.name, chain_index);
  chain.dim = density->dim();
  const bool wallclock = config.budget_mode == BudgetMode::wallclock;

  BlackBoxView view(density);
  std::unique_ptr<Sampler> sampler;
  try {
    Rng init_rng(derive_seed(chain.seed, {hash_id("init")}));
    const std::size_t points =
        spec.kind == SamplerKind::emcee ? static_cast<std::size_t>(spec.walker_count(chain.dim)) : 1;
    const ChainInit init = init_chain(config.init_mode, *density, init_rng, points);
    sampler = make_sampler(spec, view, init, derive_seed(chain.seed, {hash_id("sampler")}));
    chain.walkers = static_cast<int>(points);
  } catch (const std::exception& e) {
    chain.failed = true;
    chain.failure = std::string("initialization: ") + e.what();
    chain.checkpoints.assign(static_cast<std::size_t>(config.checkpoints), Checkpoint{});
    return chain;
  }

  const std::uint64_t e0 = view.evaluations();
  if (!wallclock) view.limit_evaluations(e0 + static_cast<std::uint64_t>(config.budget));
  const double cpu0 = thread_cpu_seconds();
  auto used = [&] {
    return wallclock ? thread_cpu_seconds() - cpu0 : static_cast<double>(view.evaluations() - e0);
  };
  auto snapshot = [&] {
    return Checkpoint{view.evaluations() - e0, chain.rows(), wallclock ? thread_cpu_seconds() - cpu0 : 0.0};
  };
  const int total_cp = config.checkpoints;
  int next_cp = 1;
  const double adapt_end = config.adapt_fraction * config.budget;

  for (;;) {
    const double u = used();
    if (sampler->adapting() && u >= adapt_end) sampler->end_adaptation();
    if (wallclock && u >= config.budget) break;
    try {
      sampler->step();
    } catch (const BudgetExhausted&) {
      break;
    } catch (const std::exception& e) {
      chain.failed = true;
      chain.failure = e.what();
      break;
    }
    bool finite = true;
    for (const Vector& x : sampler->emitted()) finite = finite && x.allFinite();
    if (!finite) {
      chain.failed = true;
      chain.failure = "non-finite state";
      break;
    }
    for (const Vector& x : sampler->emitted()) chain.append(x);
    const double after = used();
    while (next_cp <= total_cp && after >= config.budget * next_cp / total_cp) {
      chain.checkpoints.push_back(snapshot());
      ++next_cp;
    }
  }
  const Checkpoint last = snapshot();
  while (next_cp <= total_cp) {
    chain.checkpoints.push_back(last);
    ++next_cp;
  }
  chain.evaluations = last.evaluations;
  chain.cpu_seconds = last.cpu_seconds;
  chain.stats = sampler->stats();
  chain.final_tuning = sampler->tuning();
  return chain;
}

std::vector<Chain> run_pair(std::shared_ptr<const BenchmarkDensity> density,
                            const std::string& example, const SamplerSpec& spec,
                            const RunConfig& config) {
  spec.validate(density->dim());
  std::vector<Chain> chains(static_cast<std::size_t>(config.chains));
  if (config.exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int k = 0; k < config.chains; ++k) chains[k] = run_chain(density, example, spec, config, k);
  } else {
    for (int k = 0; k < config.chains; ++k) chains[k] = run_chain(density, example, spec, config, k);
  }
  return chains;
}

const Example& RunArtifacts::example(const std::string& id) const {
  for (const auto& e : examples) {
    if (e.id == id) return e;
  }
  throw ContractViolation("unknown example '" + id + "'");
}

std::vector<const Chain*> RunArtifacts::chains_of(const std::string& example,
                                                  const std::string& sampler) const {
  std::vector<const Chain*> out;
  for (const auto& c : chains) {
    if (c.example == example && c.sampler == sampler) out.push_back(&c);
  }
  return out;
}

RunArtifacts run_benchmark(const RunConfig& config) {
  config.validate();
  RunArtifacts art;
  art.config = config;
  std::set<std::string> ids;
  for (const auto& name : config.examples) {
    auto density = std::make_shared<const BenchmarkDensity>(resolve_density(name));
    if (!ids.insert(density->name()).second) {
      throw ContractViolation("duplicate example name '" + density->name() + "'");
    }
    for (const auto& s : config.samplers) s.validate(density->dim());
    GroundTruth truth = generate_ground_truth(*density, config.ground_truth_samples,
                                              ground_truth_seed(config.seed, density->name()));
    art.examples.push_back({density->name(), density, std::move(truth)});
  }

  const int n_ex = static_cast<int>(art.examples.size());
  const int n_s = static_cast<int>(config.samplers.size());
  const int k = config.chains;
  const int tasks = n_ex * n_s * k;
  art.chains.resize(static_cast<std::size_t>(tasks));
  auto run_task = [&](int t) {
    const int e = t / (n_s * k);
    const int s = (t / k) % n_s;
    const Example& ex = art.examples[e];
    art.chains[t] = run_chain(ex.density, ex.id, config.samplers[s], config, t % k);
  };
  if (config.exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int t = 0; t < tasks; ++t) run_task(t);
  } else {
    for (int t = 0; t < tasks; ++t) run_task(t);
  }
  return art;
}

void save_ground_truth(const GroundTruth& truth, const std::filesystem::path& stem) {
  const Matrix rm = truth.samples;  // column-major copy, written row by row below
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(rm.size()));
  for (Eigen::Index i = 0; i < rm.rows(); ++i) {
    for (Eigen::Index d = 0; d < rm.cols(); ++d) flat.push_back(rm(i, d));
  }
  write_matrix_bin(stem.string() + ".bin", flat.data(), flat.size());
  json h{{"n", truth.samples.rows()},
         {"dim", truth.samples.cols()},
         {"seed", truth.seed},
         {"mean", std::vector<double>(truth.mean.data(), truth.mean.data() + truth.mean.size())},
         {"std", std::vector<double>(truth.std.data(), truth.std.data() + truth.std.size())}};
  write_file(stem.string() + ".json", h.dump(2) + "\n");
}

GroundTruth load_ground_truth(const std::filesystem::path& stem) {
  json h;
  try {
    h = json::parse(read_file(stem.string() + ".json"));
  } catch (const json::exception& e) {
    throw IoError("malformed ground-truth header: " + std::string(e.what()));
  }
  const std::size_t n = h.at("n");
  const std::size_t dim = h.at("dim");
  const auto flat = read_matrix_bin(stem.string() + ".bin", n * dim);
  Matrix samples(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t d = 0; d < dim; ++d) {
      samples(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d)) = flat[i * dim + d];
    }
  }
  GroundTruth truth = GroundTruth::from_samples(std::move(samples), h.at("seed").get<std::uint64_t>());
  const auto cached_std = h.at("std").get<std::vector<double>>();
  for (std::size_t d = 0; d < dim; ++d) {
    if (std::abs(cached_std[d] - truth.std[static_cast<Eigen::Index>(d)]) >
        1e-12 * std::max(1.0, std::abs(cached_std[d]))) {
      throw IoError("ground-truth cache disagrees with stored samples");
    }
  }
  return truth;
}

void save_artifacts(const RunArtifacts& art, const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir / "densities");
  fs::create_directories(dir / "ground_truth");
  write_file(dir / "run_config.json", run_config_to_json(art.config) + "\n");

  json manifest;
  manifest["format"] = "mcbench-run-1";
  manifest["seed"] = art.config.seed;
  manifest["budget"] = {{"mode", to_string(art.config.budget_mode)}, {"amount", art.config.budget}};
  manifest["chains_per_pair"] = art.config.chains;
  manifest["checkpoints"] = art.config.checkpoints;
  manifest["init_mode"] = to_string(art.config.init_mode);
  manifest["ground_truth_samples"] = art.config.ground_truth_samples;
  json examples = json::array();
  for (const auto& e : art.examples) {
    save_density(*e.density, dir / "densities" / (e.id + ".json"));
    save_ground_truth(e.truth, dir / "ground_truth" / e.id);
    examples.push_back({{"id", e.id},
                        {"density", "densities/" + e.id + ".json"},
                        {"ground_truth", "ground_truth/" + e.id},
                        {"ground_truth_seed", e.truth.seed},
                        {"ground_truth_n", e.truth.samples.rows()}});
  }
  manifest["examples"] = examples;
  json chains = json::array();
  for (const auto& c : art.chains) {
    const fs::path stem = chain_stem(dir, c);
    fs::create_directories(stem.parent_path());
    save_chain(c, stem);
    json entry{{"example", c.example}, {"sampler", c.sampler},     {"index", c.index},
               {"seed", c.seed},       {"rows", c.rows()},         {"evaluations", c.evaluations},
               {"failed", c.failed},   {"path", fs::relative(stem, dir).string()}};
    if (art.config.budget_mode == BudgetMode::wallclock) entry["cpu_seconds"] = c.cpu_seconds;
    chains.push_back(entry);
  }
  manifest["chains"] = chains;
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

RunArtifacts load_artifacts(const std::filesystem::path& dir) {
  RunArtifacts art;
  art.config = run_config_from_json(read_file(dir / "run_config.json"));
  json manifest;
  try {
    manifest = json::parse(read_file(dir / "manifest.json"));
    for (const auto& e : manifest.at("examples")) {
      const std::string id = e.at("id");
      auto density = std::make_shared<const BenchmarkDensity>(
          load_density(dir / e.at("density").get<std::string>()));
      art.examples.push_back({id, density, load_ground_truth(dir / e.at("ground_truth").get<std::string>())});
    }
    for (const auto& c : manifest.at("chains")) {
      art.chains.push_back(load_chain(dir / c.at("path").get<std::string>()));
    }
  } catch (const json::exception& e) {
    throw IoError("malformed manifest in " + dir.string() + ": " + e.what());
  }
  return art;
}

DiagnosticsRecord diagnose(const std::vector<const Chain*>& chains,
                           const std::vector<std::size_t>& prefix) {
  DiagnosticsRecord rec;
  rec.chains = static_cast<int>(chains.size());
  rec.n_per_chain = prefix;
  if (chains.empty()) return rec;
  const int dim = chains[0]->dim;
  std::size_t min_n = *std::min_element(prefix.begin(), prefix.end());
  for (int d = 0; d < dim; ++d) {
    double ess_sum = 0.0;
    std::vector<double> z;
    std::vector<std::vector<double>> cols;
    for (std::size_t k = 0; k < chains.size(); ++k) {
      const Chain& c = *chains[k];
      const std::size_t n = prefix[k];
      cols.push_back(c.column(d, n));
      const std::size_t sweeps = n / static_cast<std::size_t>(c.walkers);
      if (c.walkers > 1 && sweeps >= 8) {
        double e = 0.0;
        std::vector<double> zw;
        for (int w = 0; w < c.walkers; ++w) {
          const auto series = c.walker_column(d, w, n);
          e += ess(series);
          zw.push_back(series.size() >= 100 ? geweke(series) : kNaN);
        }
        ess_sum += e;
        z.push_back(geweke_combined(zw));
      } else {
        ess_sum += n >= 8 ? ess(cols.back()) : kNaN;
        z.push_back(n >= 100 ? geweke(cols.back()) : kNaN);
      }
    }
    rec.ess.push_back(ess_sum);
    rec.ess_per_chain.push_back(ess_sum / static_cast<double>(chains.size()));
    double gr = kNaN;
    if (chains.size() >= 2 && min_n >= 4) {
      std::vector<std::span<const double>> spans;
      for (const auto& col : cols) spans.emplace_back(col.data(), min_n);
      gr = gelman_rubin(spans);
    }
    rec.gelman_rubin.push_back(gr);
    rec.geweke_z.push_back(geweke_combined(z));
  }
  return rec;
}

std::string diagnostics_csv(const RunArtifacts& art) {
  std::ostringstream out;
  out.precision(17);
  out << "example,sampler,checkpoint,dim,chains,n_min,ess,ess_per_chain,gelman_rubin,geweke_z\n";
  for (const auto& ex : art.examples) {
    for (const auto& spec : art.config.samplers) {
      std::vector<const Chain*> usable;
      for (const Chain* c : art.chains_of(ex.id, spec.name)) {
        if (!c->failed) usable.push_back(c);
      }
      if (usable.empty()) continue;
      const int n_cp = static_cast<int>(usable[0]->checkpoints.size());
      for (int j = 0; j < n_cp; ++j) {
        std::vector<std::size_t> prefix;
        for (const Chain* c : usable) prefix.push_back(c->checkpoints[j].samples);
        if (*std::min_element(prefix.begin(), prefix.end()) < kMinScoredSamples) continue;
        const DiagnosticsRecord rec = diagnose(usable, prefix);
        for (int d = 0; d < ex.density->dim(); ++d) {
          out << ex.id << ',' << spec.name << ',' << j + 1 << ',' << d << ',' << rec.chains << ','
              << *std::min_element(prefix.begin(), prefix.end()) << ',' << rec.ess[d] << ','
              << rec.ess_per_chain[d] << ',' << rec.gelman_rubin[d] << ',' << rec.geweke_z[d]
              << '\n';
        }
      }
    }
  }
  return out.str();
}

}  // namespace mcbench
