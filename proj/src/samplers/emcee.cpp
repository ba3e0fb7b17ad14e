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
#include <string>

#include "mcbench/error.hpp"
#include "mcbench/samplers.hpp"

namespace mcbench {

namespace {

constexpr double kCollapseTolerance = 1e-12;

}  // namespace

Emcee::Emcee(const SamplerSpec& spec, BlackBoxView& view, const ChainInit& init,
             std::uint64_t seed)
    : view_(view), a_(spec.stretch), rng_(seed) {
  const auto w = static_cast<std::size_t>(spec.walker_count(view.dim()));
  if (init.points.size() < w) {
    throw ContractViolation("emcee: need " + std::to_string(w) + " initial walkers, got " +
                            std::to_string(init.points.size()));
  }
  walkers_.assign(init.points.begin(), init.points.begin() + static_cast<std::ptrdiff_t>(w));
  for (const Vector& x : walkers_) {
    if (x.size() != view.dim()) throw ContractViolation("emcee: walker has wrong dimension");
    logp_.push_back(view.log_density(x));
    if (!std::isfinite(logp_.back())) {
      throw ContractViolation("emcee: initial walker has non-finite log density");
    }
  }
  check_collapse();
}

void Emcee::check_collapse() const {
  for (std::size_t i = 1; i < walkers_.size(); ++i) {
    if ((walkers_[i] - walkers_[0]).cwiseAbs().maxCoeff() > kCollapseTolerance) return;
  }
  throw WalkerCollapse("emcee: all walkers coincide");
}

void Emcee::step() {
  const std::size_t w = walkers_.size();
  const std::size_t half = w / 2;
  const double dm1 = static_cast<double>(view_.dim() - 1);
  decisions_.clear();
  for (int pass = 0; pass < 2; ++pass) {
    const std::size_t begin = pass == 0 ? 0 : half;
    const std::size_t end = pass == 0 ? half : w;
    const std::size_t other_begin = pass == 0 ? half : 0;
    const std::size_t other_size = pass == 0 ? w - half : half;
    for (std::size_t k = begin; k < end; ++k) {
      const auto pick = std::min(other_size - 1,
                                 static_cast<std::size_t>(uniform01(rng_) * other_size));
      const Vector& c = walkers_[other_begin + pick];
      const double u = (a_ - 1.0) * uniform01(rng_) + 1.0;
      const double z = u * u / a_;
      const Vector y = z == 1.0 ? walkers_[k] : Vector(c + z * (walkers_[k] - c));
      const double logp_y = view_.log_density(y);
      const double log_ratio = dm1 * std::log(z) + logp_y - logp_[k];
      const bool accept = mh_accept(log_ratio, rng_);
      decisions_.push_back(accept ? 1 : 0);
      ++stats_.proposals;
      if (accept) {
        walkers_[k] = y;
        logp_[k] = logp_y;
        ++stats_.accepted;
      }
    }
  }
  ++stats_.transitions;
  check_collapse();
}

}  // namespace mcbench
