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

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mcbench/error.hpp"
#include "mcbench/harness.hpp"

namespace mcbench {

using nlohmann::json;

std::string to_string(BudgetMode mode) { return mode == BudgetMode::evals ? "evals" : "wallclock"; }

BudgetMode budget_mode_from_string(const std::string& s) {
  if (s == "evals") return BudgetMode::evals;
  if (s == "wallclock") return BudgetMode::wallclock;
  throw ContractViolation("budget mode must be 'wallclock' or 'evals', got '" + s + "'");
}

std::string to_string(InitMode mode) { return mode == InitMode::approx_fit ? "approx" : "exact"; }

InitMode init_mode_from_string(const std::string& s) {
  if (s == "exact") return InitMode::exact_sample;
  if (s == "approx") return InitMode::approx_fit;
  throw ContractViolation("init mode must be 'exact' or 'approx', got '" + s + "'");
}

void RunConfig::validate() const {
  if (examples.empty()) throw ContractViolation("run config: no examples");
  if (samplers.empty()) throw ContractViolation("run config: no samplers");
  if (chains < 1) throw ContractViolation("run config: chains must be >= 1");
  if (checkpoints < 1) throw ContractViolation("run config: checkpoints must be >= 1");
  if (!(budget > 0.0)) throw ContractViolation("run config: budget must be > 0");
  if (!(adapt_fraction >= 0.0 && adapt_fraction <= 1.0)) {
    throw ContractViolation("run config: adapt_fraction must be in [0,1]");
  }
  if (ground_truth_samples < 2) throw ContractViolation("run config: ground_truth_samples must be >= 2");
  std::set<std::string> names;
  for (const auto& s : samplers) {
    if (!names.insert(s.name).second) {
      throw ContractViolation("run config: duplicate sampler name '" + s.name + "'");
    }
  }
}

std::uint64_t chain_seed(std::uint64_t master, const std::string& example,
                         const std::string& sampler, int chain) {
  return derive_seed(master, {hash_id(example), hash_id(sampler), static_cast<std::uint64_t>(chain)});
}

std::uint64_t ground_truth_seed(std::uint64_t master, const std::string& example) {
  return derive_seed(master, {hash_id(example), hash_id("ground-truth")});
}

namespace {

SamplerSpec spec_from_json(const json& j) {
  if (j.is_string()) return SamplerSpec::defaults(sampler_kind_from_string(j.get<std::string>()));
  if (!j.is_object()) throw ContractViolation("sampler entry must be a string or an object");
  const SamplerKind kind = sampler_kind_from_string(j.at("kind").get<std::string>());
  SamplerSpec s = SamplerSpec::defaults(kind, j.value("name", std::string{}));
  for (const auto& [key, value] : j.items()) {
    if (key == "kind" || key == "name") continue;
    if (key == "rwm_target_accept") s.rwm_target_accept = value;
    else if (key == "target_accept") s.target_accept = value;
    else if (key == "max_tree_depth") s.max_tree_depth = value;
    else if (key == "step_size") s.step_size = value;
    else if (key == "leapfrog_steps") s.leapfrog_steps = value;
    else if (key == "step_jitter") s.step_jitter = value;
    else if (key == "divergence_threshold") s.divergence_threshold = value;
    else if (key == "slice_width") s.slice_width = value;
    else if (key == "max_steps_out") s.max_steps_out = value;
    else if (key == "stretch") s.stretch = value;
    else if (key == "walkers") s.walkers = value;
    else if (key == "components") {
      s.components.clear();
      for (const auto& c : value) s.components.push_back(spec_from_json(c));
    } else if (key == "weights") {
      s.mix_weights = value.get<std::vector<double>>();
    } else {
      throw ContractViolation("sampler '" + s.name + "': unknown parameter '" + key + "'");
    }
  }
  return s;
}

json spec_to_json(const SamplerSpec& s) {
  json j{{"kind", to_string(s.kind)},
         {"name", s.name},
         {"rwm_target_accept", s.rwm_target_accept},
         {"target_accept", s.target_accept},
         {"max_tree_depth", s.max_tree_depth},
         {"step_size", s.step_size},
         {"leapfrog_steps", s.leapfrog_steps},
         {"step_jitter", s.step_jitter},
         {"divergence_threshold", s.divergence_threshold},
         {"slice_width", s.slice_width},
         {"max_steps_out", s.max_steps_out},
         {"stretch", s.stretch},
         {"walkers", s.walkers}};
  if (s.kind == SamplerKind::mix) {
    json comps = json::array();
    for (const auto& c : s.components) comps.push_back(spec_to_json(c));
    j["components"] = comps;
    j["weights"] = s.mix_weights;
  }
  return j;
}

}  // namespace

SamplerSpec sampler_spec_from_json_text(const std::string& text) {
  try {
    return spec_from_json(json::parse(text));
  } catch (const json::exception& e) {
    throw ContractViolation(std::string("malformed sampler spec: ") + e.what());
  }
}

std::string sampler_spec_to_json_text(const SamplerSpec& spec) { return spec_to_json(spec).dump(); }

RunConfig run_config_from_json(const std::string& text) {
  RunConfig c;
  try {
    const json j = json::parse(text);
    static const std::set<std::string> known{"examples", "samplers", "chains", "budget",
                                             "checkpoints", "init_mode", "seed", "output_dir",
                                             "ground_truth_samples", "adapt_fraction"};
    for (const auto& [key, value] : j.items()) {
      if (!known.count(key)) throw ContractViolation("run config: unknown field '" + key + "'");
    }
    c.examples = j.at("examples").get<std::vector<std::string>>();
    for (const auto& s : j.at("samplers")) c.samplers.push_back(spec_from_json(s));
    c.chains = j.value("chains", c.chains);
    if (j.contains("budget")) {
      const auto& b = j.at("budget");
      c.budget_mode = budget_mode_from_string(b.at("mode").get<std::string>());
      c.budget = b.at("amount");
    }
    c.checkpoints = j.value("checkpoints", c.checkpoints);
    if (j.contains("init_mode")) c.init_mode = init_mode_from_string(j.at("init_mode"));
    c.seed = j.value("seed", c.seed);
    if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
    c.ground_truth_samples = j.value("ground_truth_samples", c.ground_truth_samples);
    c.adapt_fraction = j.value("adapt_fraction", c.adapt_fraction);
  } catch (const json::exception& e) {
    throw ContractViolation(std::string("malformed run config: ") + e.what());
  }
  c.validate();
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open run config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return run_config_from_json(ss.str());
}

std::string run_config_to_json(const RunConfig& c) {
  json samplers = json::array();
  for (const auto& s : c.samplers) samplers.push_back(spec_to_json(s));
  json j{{"examples", c.examples},
         {"samplers", samplers},
         {"chains", c.chains},
         {"budget", {{"mode", to_string(c.budget_mode)}, {"amount", c.budget}}},
         {"checkpoints", c.checkpoints},
         {"init_mode", to_string(c.init_mode)},
         {"seed", c.seed},
         {"output_dir", c.output_dir.string()},
         {"ground_truth_samples", c.ground_truth_samples},
         {"adapt_fraction", c.adapt_fraction}};
  return j.dump(2);
}

}  // namespace mcbench
