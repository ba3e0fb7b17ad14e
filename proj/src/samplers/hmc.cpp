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
#include <limits>

#include "mcbench/samplers.hpp"

namespace mcbench {

namespace {

constexpr double kGamma = 0.05;
constexpr double kT0 = 10.0;
constexpr double kKappa = 0.75;

bool all_finite(const Vector& v) { return v.allFinite(); }

}  // namespace

double kinetic_energy(const Vector& p, const Vector& inv_mass) {
  return 0.5 * p.cwiseProduct(inv_mass).dot(p);
}

double hamiltonian(const PhasePoint& z, const Vector& inv_mass) {
  return -z.logp + kinetic_energy(z.p, inv_mass);
}

LeapfrogResult leapfrog(const Vector& x, const Vector& p, double eps, int n_steps,
                        const Vector& inv_mass, BlackBoxView& view) {
  LeapfrogResult out{x, p, false};
  if (n_steps <= 0) return out;
  Vector g = view.gradient(out.x);
  for (int i = 0; i < n_steps; ++i) {
    out.p += 0.5 * eps * g;
    out.x += eps * inv_mass.cwiseProduct(out.p);
    g = view.gradient(out.x);
    out.p += 0.5 * eps * g;
    if (!all_finite(out.x) || !all_finite(out.p)) {
      out.divergent = true;
      break;
    }
  }
  return out;
}

DualAveraging::DualAveraging(double initial_step, double target)
    : target_(target), mu_(std::log(10.0 * initial_step)), x_bar_(std::log(initial_step)) {}

double DualAveraging::update(double accept_stat) {
  ++counter_;
  const double t = static_cast<double>(counter_);
  const double eta = 1.0 / (t + kT0);
  s_bar_ = (1.0 - eta) * s_bar_ + eta * (target_ - accept_stat);
  const double x = mu_ - std::sqrt(t) / kGamma * s_bar_;
  const double w = std::pow(t, -kKappa);
  x_bar_ = w * x + (1.0 - w) * x_bar_;
  return std::exp(x);
}

double DualAveraging::final_step() const { return std::exp(x_bar_); }

Hmc::Hmc(const SamplerSpec& spec, BlackBoxView& view, const ChainInit& init, std::uint64_t seed)
    : PointSampler(view, init.points.at(0), init.scale_guess, seed),
      spec_(spec),
      inv_mass_(init.scale_guess.array().square()),
      eps_(spec.step_size),
      adapt_(spec.step_size, spec.target_accept) {}

void Hmc::set_state(const Vector& x, double logp) {
  PointSampler::set_state(x, logp);
  grad_valid_ = false;
}

void Hmc::step() {
  if (!grad_valid_) {
    grad_ = view_.gradient(x_);
    grad_valid_ = true;
  }
  Vector p(view_.dim());
  for (int d = 0; d < view_.dim(); ++d) p[d] = standard_normal(rng_) / std::sqrt(inv_mass_[d]);
  const double eps = eps_ * (1.0 + spec_.step_jitter * (2.0 * uniform01(rng_) - 1.0));

  const double h0 = -logp_ + kinetic_energy(p, inv_mass_);
  Vector x = x_;
  Vector g = grad_;
  bool divergent = false;
  for (int i = 0; i < spec_.leapfrog_steps; ++i) {
    p += 0.5 * eps * g;
    x += eps * inv_mass_.cwiseProduct(p);
    g = view_.gradient(x);
    p += 0.5 * eps * g;
    if (!all_finite(x) || !all_finite(p)) {
      divergent = true;
      break;
    }
  }
  double logp_new = -std::numeric_limits<double>::infinity();
  if (!divergent) logp_new = view_.log_density(x);
  const double h1 = -logp_new + kinetic_energy(p, inv_mass_);
  double log_ratio = h0 - h1;
  if (!std::isfinite(h1) || h1 - h0 > spec_.divergence_threshold) {
    divergent = true;
    log_ratio = -std::numeric_limits<double>::infinity();
  }
  const double alpha = mh_accept_probability(log_ratio);

  ++stats_.transitions;
  ++stats_.proposals;
  stats_.accept_stat_sum += alpha;
  if (divergent) ++stats_.divergences;
  if (mh_accept(log_ratio, rng_)) {
    x_ = x;
    logp_ = logp_new;
    grad_ = g;
    ++stats_.accepted;
  }
  if (adapting_) eps_ = adapt_.update(alpha);
}

void Hmc::end_adaptation() {
  if (adapting_ && adapt_.count() > 0) eps_ = adapt_.final_step();
  adapting_ = false;
}

}  // namespace mcbench
