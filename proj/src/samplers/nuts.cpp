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
#include <limits>

#include "mcbench/samplers.hpp"

namespace mcbench {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_sum_exp(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  const double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

bool no_u_turn(const Vector& p_sharp_minus, const Vector& p_sharp_plus, const Vector& rho) {
  return p_sharp_plus.dot(rho) > 0.0 && p_sharp_minus.dot(rho) > 0.0;
}

}  // namespace

Nuts::Nuts(const SamplerSpec& spec, BlackBoxView& view, const ChainInit& init, std::uint64_t seed)
    : PointSampler(view, init.points.at(0), init.scale_guess, seed),
      spec_(spec),
      inv_mass_(init.scale_guess.array().square()),
      adapt_(1.0, spec.target_accept) {
  find_reasonable_step_size();
  adapt_ = DualAveraging(eps_, spec_.target_accept);
}

void Nuts::set_state(const Vector& x, double logp) {
  PointSampler::set_state(x, logp);
  grad_valid_ = false;
}

void Nuts::ensure_gradient() {
  if (!grad_valid_) {
    grad_ = view_.gradient(x_);
    grad_valid_ = true;
  }
}

void Nuts::evolve(PhasePoint& z, double eps) {
  z.p += 0.5 * eps * z.grad;
  z.x += eps * inv_mass_.cwiseProduct(z.p);
  z.logp = view_.log_density(z.x);
  z.grad = view_.gradient(z.x);
  z.p += 0.5 * eps * z.grad;
}

// Doubling search for a step size whose one-step acceptance crosses 0.8.
void Nuts::find_reasonable_step_size() {
  ensure_gradient();
  const double log_target = std::log(0.8);
  auto trial = [&] {
    PhasePoint z{x_, Vector(view_.dim()), grad_, logp_};
    for (int d = 0; d < view_.dim(); ++d) z.p[d] = standard_normal(rng_) / std::sqrt(inv_mass_[d]);
    const double h0 = hamiltonian(z, inv_mass_);
    evolve(z, eps_);
    double h = hamiltonian(z, inv_mass_);
    if (std::isnan(h)) h = kInf;
    return h0 - h;
  };
  const int direction = trial() > log_target ? 1 : -1;
  for (int i = 0; i < 60; ++i) {
    const double delta_h = trial();
    if (direction == 1 && !(delta_h > log_target)) break;
    if (direction == -1 && !(delta_h < log_target)) break;
    const double next = direction == 1 ? eps_ * 2.0 : eps_ * 0.5;
    if (next > 1e7 || next < 1e-10) break;
    eps_ = next;
  }
}

bool Nuts::build_tree(int depth, PhasePoint& z, PhasePoint& z_propose, Vector& p_sharp_beg,
                      Vector& p_sharp_end, Vector& rho, Vector& p_beg, Vector& p_end, double h0,
                      double sign, int& n_leapfrog, double& log_sum_weight,
                      double& sum_metro_prob) {
  if (depth == 0) {
    evolve(z, sign * eps_);
    ++n_leapfrog;
    double h = hamiltonian(z, inv_mass_);
    if (std::isnan(h)) h = kInf;
    if (h - h0 > spec_.divergence_threshold) divergent_ = true;
    log_sum_weight = log_sum_exp(log_sum_weight, h0 - h);
    sum_metro_prob += h0 - h > 0.0 ? 1.0 : std::exp(h0 - h);
    z_propose = z;
    p_sharp_beg = inv_mass_.cwiseProduct(z.p);
    p_sharp_end = p_sharp_beg;
    rho += z.p;
    p_beg = z.p;
    p_end = p_beg;
    return !divergent_;
  }

  const Eigen::Index n = z.p.size();
  double log_sum_weight_init = -kInf;
  Vector p_init_end(n), p_sharp_init_end(n);
  Vector rho_init = Vector::Zero(n);
  if (!build_tree(depth - 1, z, z_propose, p_sharp_beg, p_sharp_init_end, rho_init, p_beg,
                  p_init_end, h0, sign, n_leapfrog, log_sum_weight_init, sum_metro_prob)) {
    return false;
  }

  PhasePoint z_propose_final = z;
  double log_sum_weight_final = -kInf;
  Vector p_final_beg(n), p_sharp_final_beg(n);
  Vector rho_final = Vector::Zero(n);
  if (!build_tree(depth - 1, z, z_propose_final, p_sharp_final_beg, p_sharp_end, rho_final,
                  p_final_beg, p_end, h0, sign, n_leapfrog, log_sum_weight_final,
                  sum_metro_prob)) {
    return false;
  }

  const double log_sum_weight_subtree = log_sum_exp(log_sum_weight_init, log_sum_weight_final);
  log_sum_weight = log_sum_exp(log_sum_weight, log_sum_weight_subtree);
  if (log_sum_weight_final > log_sum_weight_subtree) {
    z_propose = z_propose_final;
  } else if (uniform01(rng_) < std::exp(log_sum_weight_final - log_sum_weight_subtree)) {
    z_propose = z_propose_final;
  }

  const Vector rho_subtree = rho_init + rho_final;
  rho += rho_subtree;
  bool persist = no_u_turn(p_sharp_beg, p_sharp_end, rho_subtree);
  persist = persist && no_u_turn(p_sharp_beg, p_sharp_final_beg, rho_init + p_final_beg);
  persist = persist && no_u_turn(p_sharp_init_end, p_sharp_end, rho_final + p_init_end);
  return persist;
}

void Nuts::step() {
  ensure_gradient();
  const int dim = view_.dim();
  PhasePoint z{x_, Vector(dim), grad_, logp_};
  for (int d = 0; d < dim; ++d) z.p[d] = standard_normal(rng_) / std::sqrt(inv_mass_[d]);

  PhasePoint z_fwd = z, z_bck = z, z_sample = z, z_propose = z;
  Vector p_fwd_bck = z.p, p_fwd_fwd = z.p, p_bck_fwd = z.p, p_bck_bck = z.p;
  Vector p_sharp_fwd_bck = inv_mass_.cwiseProduct(z.p);
  Vector p_sharp_fwd_fwd = p_sharp_fwd_bck, p_sharp_bck_fwd = p_sharp_fwd_bck,
         p_sharp_bck_bck = p_sharp_fwd_bck;
  Vector rho = z.p;

  double log_sum_weight = 0.0;
  const double h0 = hamiltonian(z, inv_mass_);
  int n_leapfrog = 0;
  double sum_metro_prob = 0.0;
  depth_ = 0;
  divergent_ = false;
  bool moved = false;

  while (depth_ < spec_.max_tree_depth) {
    Vector rho_fwd = Vector::Zero(dim), rho_bck = Vector::Zero(dim);
    double log_sum_weight_subtree = -kInf;
    bool valid;
    if (uniform01(rng_) > 0.5) {
      z = z_fwd;
      rho_bck = rho;
      p_bck_fwd = p_fwd_bck;
      p_sharp_bck_fwd = p_sharp_fwd_bck;
      valid = build_tree(depth_, z, z_propose, p_sharp_fwd_bck, p_sharp_fwd_fwd, rho_fwd,
                         p_fwd_bck, p_fwd_fwd, h0, 1.0, n_leapfrog, log_sum_weight_subtree,
                         sum_metro_prob);
      z_fwd = z;
    } else {
      z = z_bck;
      rho_fwd = rho;
      p_fwd_bck = p_bck_fwd;
      p_sharp_fwd_bck = p_sharp_bck_fwd;
      valid = build_tree(depth_, z, z_propose, p_sharp_bck_fwd, p_sharp_bck_bck, rho_bck,
                         p_bck_fwd, p_bck_bck, h0, -1.0, n_leapfrog, log_sum_weight_subtree,
                         sum_metro_prob);
      z_bck = z;
    }
    if (!valid) break;
    ++depth_;

    // Biased progressive sampling: favour the new subtree.
    if (log_sum_weight_subtree > log_sum_weight) {
      z_sample = z_propose;
      moved = true;
    } else if (uniform01(rng_) < std::exp(log_sum_weight_subtree - log_sum_weight)) {
      z_sample = z_propose;
      moved = true;
    }
    log_sum_weight = log_sum_exp(log_sum_weight, log_sum_weight_subtree);

    rho = rho_bck + rho_fwd;
    bool persist = no_u_turn(p_sharp_bck_bck, p_sharp_fwd_fwd, rho);
    persist = persist && no_u_turn(p_sharp_bck_bck, p_sharp_fwd_bck, rho_bck + p_fwd_bck);
    persist = persist && no_u_turn(p_sharp_bck_fwd, p_sharp_fwd_fwd, rho_fwd + p_bck_fwd);
    if (!persist) break;
  }

  last_accept_stat_ = n_leapfrog > 0 ? sum_metro_prob / n_leapfrog : 0.0;
  ++stats_.transitions;
  stats_.proposals += static_cast<std::uint64_t>(n_leapfrog);
  stats_.accept_stat_sum += last_accept_stat_;
  if (divergent_) ++stats_.divergences;
  if (moved) {
    x_ = z_sample.x;
    logp_ = z_sample.logp;
    grad_ = z_sample.grad;
    ++stats_.accepted;
  }
  if (adapting_) eps_ = adapt_.update(last_accept_stat_);
}

void Nuts::end_adaptation() {
  if (adapting_ && adapt_.count() > 0) eps_ = adapt_.final_step();
  adapting_ = false;
}

}  // namespace mcbench
