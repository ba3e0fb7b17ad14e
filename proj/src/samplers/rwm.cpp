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

namespace {

RwmFamily family_of(SamplerKind kind) {
  switch (kind) {
    case SamplerKind::rwm_cauchy: return RwmFamily::cauchy;
    case SamplerKind::rwm_laplace: return RwmFamily::laplace;
    default: return RwmFamily::gauss;
  }
}

}  // namespace

RandomWalkMetropolis::RandomWalkMetropolis(const SamplerSpec& spec, BlackBoxView& view,
                                           const ChainInit& init, std::uint64_t seed)
    : PointSampler(view, init.points.at(0), init.scale_guess, seed),
      family_(family_of(spec.kind)),
      target_(spec.rwm_target_accept) {
  const double base = 2.38 / std::sqrt(static_cast<double>(view.dim()));
  adapt_.log_scale = (scale_ * base).array().log();
}

Vector RandomWalkMetropolis::proposal_scale() const { return adapt_.log_scale.array().exp(); }

void RandomWalkMetropolis::step() {
  const Vector scale = proposal_scale();
  const Vector delta = scale.cwiseProduct(draw_increment(family_, view_.dim(), rng_));
  const Vector y = x_ + delta;
  const double logp_y = view_.log_density(y);
  // All three increment families are symmetric, so q cancels.
  const double log_ratio = logp_y - logp_;
  ++stats_.transitions;
  ++stats_.proposals;
  if (mh_accept(log_ratio, rng_)) {
    x_ = y;
    logp_ = logp_y;
    ++stats_.accepted;
  }
  if (adapting_) adapt_rwm_scale(adapt_, mh_accept_probability(log_ratio), target_);
}

std::vector<double> RandomWalkMetropolis::tuning() const {
  const Vector s = proposal_scale();
  return {s.data(), s.data() + s.size()};
}

}  // namespace mcbench
