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

#include <cmath>

#include "mcbench/samplers.hpp"

namespace mcbench {

SliceSampler::SliceSampler(const SamplerSpec& spec, BlackBoxView& view, const ChainInit& init,
                           std::uint64_t seed)
    : PointSampler(view, init.points.at(0), init.scale_guess, seed),
      width_(spec.slice_width * init.scale_guess),
      max_steps_out_(spec.max_steps_out) {}

void SliceSampler::step() {
  Vector probe = x_;
  for (int d = 0; d < view_.dim(); ++d) {
    auto logf = [&](double t) {
      probe[d] = t;
      return view_.log_density(probe);
    };
    const double log_y = logp_ + std::log(uniform01(rng_));
    const SliceDraw draw = slice_sample_1d(logf, x_[d], logp_, log_y, width_[d], max_steps_out_, rng_);
    x_[d] = draw.x;
    logp_ = draw.logp;
    probe[d] = draw.x;
    ++stats_.proposals;
    if (draw.stalled) {
      ++stats_.stalls;
    } else {
      ++stats_.accepted;
    }
  }
  ++stats_.transitions;
}

std::vector<double> SliceSampler::tuning() const {
  return {width_.data(), width_.data() + width_.size()};
}

}  // namespace mcbench
