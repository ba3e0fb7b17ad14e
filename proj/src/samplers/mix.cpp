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

#include "mcbench/rng.hpp"
#include "mcbench/samplers.hpp"

namespace mcbench {

MixSampler::MixSampler(const SamplerSpec& spec, BlackBoxView& view, const ChainInit& init,
                       std::uint64_t seed)
    : PointSampler(view, init.points.at(0), init.scale_guess, seed),
      selector_(derive_seed(seed, {hash_id("mix-selector")})) {
  double total = 0.0;
  for (double w : spec.mix_weights) total += w;
  double acc = 0.0;
  for (std::size_t i = 0; i < spec.components.size(); ++i) {
    const std::uint64_t s = i == 0 ? seed : derive_seed(seed, {i});
    components_.push_back(make_point_sampler(spec.components[i], view, init, s));
    acc += spec.mix_weights[i] / total;
    cumulative_.push_back(acc);
  }
  cumulative_.back() = 1.0;
  stats_.component_usage.assign(components_.size(), 0);
}

void MixSampler::step() {
  const double u = uniform01(selector_);
  std::size_t i = 0;
  while (i + 1 < cumulative_.size() && !(u < cumulative_[i])) ++i;
  PointSampler& kernel = *components_[i];
  // Skip the hand-over when the kernel already sits at the current state so
  // its cached gradient survives.
  if (kernel.position() != x_) kernel.set_state(x_, logp_);
  kernel.step();
  const bool moved = kernel.position() != x_;
  x_ = kernel.position();
  logp_ = kernel.current_logp();
  ++stats_.transitions;
  ++stats_.proposals;
  if (moved) ++stats_.accepted;
  ++stats_.component_usage[i];
}

void MixSampler::end_adaptation() {
  for (auto& c : components_) c->end_adaptation();
  adapting_ = false;
}

std::vector<double> MixSampler::tuning() const {
  std::vector<double> out;
  for (const auto& c : components_) {
    const auto t = c->tuning();
    out.insert(out.end(), t.begin(), t.end());
  }
  return out;
}

}  // namespace mcbench
