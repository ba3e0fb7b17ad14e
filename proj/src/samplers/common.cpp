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
#include <numbers>

#include "mcbench/error.hpp"
#include "mcbench/log.hpp"
#include "mcbench/samplers.hpp"

namespace mcbench {

std::string to_string(SamplerKind kind) {
  switch (kind) {
    case SamplerKind::rwm_gauss: return "rwm_gauss";
    case SamplerKind::rwm_cauchy: return "rwm_cauchy";
    case SamplerKind::rwm_laplace: return "rwm_laplace";
    case SamplerKind::hmc: return "hmc";
    case SamplerKind::nuts: return "nuts";
    case SamplerKind::slice: return "slice";
    case SamplerKind::emcee: return "emcee";
    case SamplerKind::mix: return "mix";
  }
  return "?";
}

SamplerKind sampler_kind_from_string(const std::string& s) {
  for (auto k : {SamplerKind::rwm_gauss, SamplerKind::rwm_cauchy, SamplerKind::rwm_laplace,
                 SamplerKind::hmc, SamplerKind::nuts, SamplerKind::slice, SamplerKind::emcee,
                 SamplerKind::mix}) {
    if (to_string(k) == s) return k;
  }
  throw ContractViolation("unknown sampler kind '" + s + "'");
}

SamplerSpec SamplerSpec::defaults(SamplerKind kind, std::string name) {
  SamplerSpec spec;
  spec.kind = kind;
  spec.name = name.empty() ? to_string(kind) : std::move(name);
  if (kind == SamplerKind::mix) {
    spec.components = {defaults(SamplerKind::nuts), defaults(SamplerKind::rwm_gauss)};
    spec.mix_weights = {0.1, 0.9};
  }
  return spec;
}

int SamplerSpec::walker_count(int dim) const {
  return walkers > 0 ? walkers : std::max(2 * dim, 10);
}

void SamplerSpec::validate(int dim) const {
  auto require = [&](bool ok, const char* what) {
    if (!ok) throw ContractViolation("sampler '" + name + "': " + what);
  };
  require(rwm_target_accept > 0.0 && rwm_target_accept < 1.0, "rwm_target_accept must be in (0,1)");
  require(target_accept > 0.0 && target_accept < 1.0, "target_accept must be in (0,1)");
  require(max_tree_depth >= 1, "max_tree_depth must be >= 1");
  require(step_size > 0.0, "step_size must be > 0");
  require(leapfrog_steps >= 1, "leapfrog_steps must be >= 1");
  require(step_jitter >= 0.0 && step_jitter < 1.0, "step_jitter must be in [0,1)");
  require(divergence_threshold > 0.0, "divergence_threshold must be > 0");
  require(slice_width > 0.0, "slice_width must be > 0");
  require(max_steps_out >= 1, "max_steps_out must be >= 1");
  require(stretch >= 1.0, "stretch must be >= 1");
  if (kind == SamplerKind::emcee) require(walker_count(dim) >= dim + 2, "emcee needs >= D+2 walkers");
  if (kind == SamplerKind::mix) {
    require(!components.empty(), "mix needs components");
    require(components.size() == mix_weights.size(), "mix weights/components mismatch");
    double total = 0.0;
    for (double w : mix_weights) {
      require(w >= 0.0, "mix weights must be non-negative");
      total += w;
    }
    require(total > 0.0, "mix weights must not all be zero");
    for (const auto& c : components) {
      require(c.kind != SamplerKind::mix && c.kind != SamplerKind::emcee,
              "mix components must be single-point kernels");
      c.validate(dim);
    }
  }
}

ChainInit init_chain(InitMode mode, const BenchmarkDensity& density, Rng& rng,
                     std::size_t n_points) {
  if (n_points == 0) throw ContractViolation("init_chain: need at least one point");
  ChainInit out;
  if (mode == InitMode::exact_sample) {
    const Matrix x0 = density.sample_exact(n_points, rng);
    for (Eigen::Index i = 0; i < x0.rows(); ++i) out.points.push_back(x0.row(i).transpose());
  }
  // Moment-matched diagonal Gaussian standing in for a variational fit.
  const Matrix fit = density.sample_exact(kApproxFitDraws, rng);
  const Vector mean = fit.colwise().mean().transpose();
  Vector sd = ((fit.rowwise() - mean.transpose()).array().square().colwise().mean()).sqrt().transpose();
  for (Eigen::Index d = 0; d < sd.size(); ++d) {
    if (!(sd[d] > 0.0)) sd[d] = 1.0;
  }
  out.scale_guess = sd;
  if (mode == InitMode::approx_fit) {
    for (std::size_t i = 0; i < n_points; ++i) {
      Vector x(density.dim());
      for (int d = 0; d < density.dim(); ++d) x[d] = mean[d] + sd[d] * standard_normal(rng);
      out.points.push_back(std::move(x));
    }
  }
  return out;
}

double mh_accept_probability(double log_ratio) {
  if (std::isnan(log_ratio)) return 0.0;
  return log_ratio >= 0.0 ? 1.0 : std::exp(log_ratio);
}

bool mh_accept(double log_ratio, Rng& rng) {
  const double u = uniform01(rng);
  if (std::isnan(log_ratio)) {
    log_warning("NaN Metropolis-Hastings log ratio treated as reject");
    return false;
  }
  return std::log(u) < log_ratio;
}

Vector draw_increment(RwmFamily family, int dim, Rng& rng) {
  Vector z(dim);
  for (int d = 0; d < dim; ++d) {
    switch (family) {
      case RwmFamily::gauss:
        z[d] = standard_normal(rng);
        break;
      case RwmFamily::cauchy:
        z[d] = std::tan(std::numbers::pi * (uniform01(rng) - 0.5));
        break;
      case RwmFamily::laplace: {
        const double e = -std::log(1.0 - uniform01(rng));
        z[d] = uniform01(rng) < 0.5 ? -e : e;
        break;
      }
    }
  }
  return z;
}

double proposal_log_density(RwmFamily family, const Vector& delta, const Vector& scale) {
  double lp = 0.0;
  for (Eigen::Index d = 0; d < delta.size(); ++d) {
    const double u = delta[d] / scale[d];
    const double log_s = std::log(scale[d]);
    switch (family) {
      case RwmFamily::gauss:
        lp += -0.5 * u * u - log_s - 0.5 * std::log(2.0 * std::numbers::pi);
        break;
      case RwmFamily::cauchy:
        lp += -std::log(std::numbers::pi) - log_s - std::log1p(u * u);
        break;
      case RwmFamily::laplace:
        lp += -std::numbers::ln2 - log_s - std::abs(u);
        break;
    }
  }
  return lp;
}

void adapt_rwm_scale(RwmAdaptation& state, double acceptance, double target) {
  ++state.t;
  const double gain = 1.0 / std::ceil(static_cast<double>(state.t) / 50.0);
  state.log_scale.array() += gain * (acceptance - target);
}

PointSampler::PointSampler(BlackBoxView& view, const Vector& x0, Vector scale_guess,
                           std::uint64_t seed)
    : view_(view), x_(x0), scale_(std::move(scale_guess)), rng_(seed) {
  if (x_.size() != view_.dim() || scale_.size() != view_.dim()) {
    throw ContractViolation("sampler: initial point / scale guess has wrong dimension");
  }
  logp_ = view_.log_density(x_);
  if (!std::isfinite(logp_)) throw ContractViolation("sampler: initial point has non-finite log density");
}

void PointSampler::set_state(const Vector& x, double logp) {
  x_ = x;
  logp_ = logp;
}

std::unique_ptr<PointSampler> make_point_sampler(const SamplerSpec& spec, BlackBoxView& view,
                                                 const ChainInit& init, std::uint64_t seed) {
  spec.validate(view.dim());
  switch (spec.kind) {
    case SamplerKind::rwm_gauss:
    case SamplerKind::rwm_cauchy:
    case SamplerKind::rwm_laplace:
      return std::make_unique<RandomWalkMetropolis>(spec, view, init, seed);
    case SamplerKind::hmc: return std::make_unique<Hmc>(spec, view, init, seed);
    case SamplerKind::nuts: return std::make_unique<Nuts>(spec, view, init, seed);
    case SamplerKind::slice: return std::make_unique<SliceSampler>(spec, view, init, seed);
    case SamplerKind::mix: return std::make_unique<MixSampler>(spec, view, init, seed);
    case SamplerKind::emcee: break;
  }
  throw ContractViolation("sampler kind '" + to_string(spec.kind) + "' is not a single-point kernel");
}

std::unique_ptr<Sampler> make_sampler(const SamplerSpec& spec, BlackBoxView& view,
                                      const ChainInit& init, std::uint64_t seed) {
  if (spec.kind == SamplerKind::emcee) {
    spec.validate(view.dim());
    return std::make_unique<Emcee>(spec, view, init, seed);
  }
  return make_point_sampler(spec, view, init, seed);
}

}  // namespace mcbench
