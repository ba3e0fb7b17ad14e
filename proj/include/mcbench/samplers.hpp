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

#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "mcbench/density.hpp"
#include "mcbench/rng.hpp"

namespace mcbench {

enum class SamplerKind { rwm_gauss, rwm_cauchy, rwm_laplace, hmc, nuts, slice, emcee, mix };

std::string to_string(SamplerKind kind);
SamplerKind sampler_kind_from_string(const std::string& s);

/// Kernel choice plus every tuning parameter. Step sizes and widths are
/// expressed in units of the per-dimension scale guess from init_chain.
struct SamplerSpec {
  std::string name;
  SamplerKind kind = SamplerKind::rwm_gauss;

  double rwm_target_accept = 0.234;
  double target_accept = 0.8;  // HMC and NUTS dual averaging
  int max_tree_depth = 10;
  double step_size = 0.1;  // HMC initial step size
  int leapfrog_steps = 32;
  double step_jitter = 0.1;  // HMC: eps drawn uniformly in eps*(1 +- jitter)
  double divergence_threshold = 1000.0;
  double slice_width = 1.0;
  int max_steps_out = 50;
  double stretch = 2.0;  // emcee a
  int walkers = 0;       // 0 selects max(2D, 10)

  std::vector<SamplerSpec> components;  // mix only
  std::vector<double> mix_weights;

  /// Defaults for `kind`; mix defaults to NUTS 0.1 / rwm_gauss 0.9.
  static SamplerSpec defaults(SamplerKind kind, std::string name = "");
  int walker_count(int dim) const;
  void validate(int dim) const;
};

enum class InitMode { exact_sample, approx_fit };

/// Starting point(s) and the per-dimension scale guess handed to samplers.
struct ChainInit {
  std::vector<Vector> points;
  Vector scale_guess;
};

inline constexpr std::size_t kApproxFitDraws = 2000;

/// Harness-side initialization. exact_sample: the first `n_points` draws of
/// `rng` from the target. approx_fit: draws from a diagonal Gaussian matched
/// to the moments of 2000 private exact draws. Both modes take the scale
/// guess from that moment-matched fit.
ChainInit init_chain(InitMode mode, const BenchmarkDensity& density, Rng& rng,
                     std::size_t n_points = 1);

/// Accept with probability min(1, exp(log_ratio)). Always consumes exactly
/// one uniform. NaN is rejected with a warning.
bool mh_accept(double log_ratio, Rng& rng);
double mh_accept_probability(double log_ratio);

// ---- random-walk Metropolis pieces ------------------------------------

enum class RwmFamily { gauss, cauchy, laplace };

/// Standardized iid increments for one proposal.
Vector draw_increment(RwmFamily family, int dim, Rng& rng);
/// log q(x + delta | x) for the diagonal-scale proposal.
double proposal_log_density(RwmFamily family, const Vector& delta, const Vector& scale);

struct RwmAdaptation {
  Vector log_scale;
  std::uint64_t t = 0;
};

/// Robbins-Monro: log_scale += (acceptance - target) / ceil(t / 50).
void adapt_rwm_scale(RwmAdaptation& state, double acceptance, double target = 0.234);

// ---- Hamiltonian pieces -----------------------------------------------

/// Position, momentum, and the cached log density / gradient at `x`.
struct PhasePoint {
  Vector x;
  Vector p;
  Vector grad;
  double logp = 0.0;
};

double kinetic_energy(const Vector& p, const Vector& inv_mass);
double hamiltonian(const PhasePoint& z, const Vector& inv_mass);

struct LeapfrogResult {
  Vector x;
  Vector p;
  bool divergent = false;
};

/// `n_steps` leapfrog steps with diagonal inverse mass `inv_mass`.
/// n_steps == 0 is the identity and performs no evaluations.
LeapfrogResult leapfrog(const Vector& x, const Vector& p, double eps, int n_steps,
                        const Vector& inv_mass, BlackBoxView& view);

/// Nesterov dual averaging of log step size toward a target statistic.
class DualAveraging {
 public:
  DualAveraging(double initial_step, double target);
  /// Feeds one acceptance statistic and returns the next step size.
  double update(double accept_stat);
  double final_step() const;
  std::uint64_t count() const { return counter_; }

 private:
  double target_;
  double mu_;
  double s_bar_ = 0.0;
  double x_bar_ = 0.0;
  std::uint64_t counter_ = 0;
};

// ---- slice sampling pieces ----------------------------------------------

struct SliceDraw {
  double x;
  double logp;
  bool stalled;
  int evaluations;
};

/// Stepping-out and shrinkage at fixed log height `log_y` for a univariate
/// log density `logf`.
template <class LogF>
SliceDraw slice_sample_1d(LogF&& logf, double x0, double logp0, double log_y, double width,
                          int max_steps_out, Rng& rng);

// ---- kernels ------------------------------------------------------------

struct SamplerStats {
  std::uint64_t transitions = 0;
  std::uint64_t proposals = 0;
  std::uint64_t accepted = 0;
  std::uint64_t divergences = 0;
  std::uint64_t stalls = 0;
  double accept_stat_sum = 0.0;  // HMC/NUTS mean acceptance statistic numerator
  std::vector<std::uint64_t> component_usage;  // mix only
};

/// Uniform single-transition contract shared by every kernel. A sampler owns
/// its random stream and talks to the target only through a BlackBoxView.
class Sampler {
 public:
  virtual ~Sampler() = default;

  virtual void step() = 0;
  /// Rows appended to the chain by the most recent step(), in order.
  virtual std::span<const Vector> emitted() const = 0;
  /// Freezes every tuning parameter for the rest of the run.
  virtual void end_adaptation() = 0;
  /// Snapshot of the tuning parameters (scales, step sizes, ...).
  virtual std::vector<double> tuning() const = 0;

  bool adapting() const { return adapting_; }
  const SamplerStats& stats() const { return stats_; }

 protected:
  bool adapting_ = true;
  SamplerStats stats_;
};

/// Kernels whose state is a single point. Keeps current_logp coherent with
/// the view's log density at `position()`.
class PointSampler : public Sampler {
 public:
  std::span<const Vector> emitted() const override { return {&x_, 1}; }
  const Vector& position() const { return x_; }
  double current_logp() const { return logp_; }
  /// Replaces the state; `logp` must be the view's log density at `x`.
  virtual void set_state(const Vector& x, double logp);

 protected:
  PointSampler(BlackBoxView& view, const Vector& x0, Vector scale_guess, std::uint64_t seed);

  BlackBoxView& view_;
  Vector x_;
  double logp_;
  Vector scale_;
  Rng rng_;
};

class RandomWalkMetropolis : public PointSampler {
 public:
  RandomWalkMetropolis(const SamplerSpec& spec, BlackBoxView& view, const ChainInit& init,
                       std::uint64_t seed);
  void step() override;
  void end_adaptation() override { adapting_ = false; }
  std::vector<double> tuning() const override;
  Vector proposal_scale() const;

 private:
  RwmFamily family_;
  double target_;
  RwmAdaptation adapt_;
};

class Hmc : public PointSampler {
 public:
  Hmc(const SamplerSpec& spec, BlackBoxView& view, const ChainInit& init, std::uint64_t seed);
  void step() override;
  void end_adaptation() override;
  std::vector<double> tuning() const override { return {eps_}; }
  void set_state(const Vector& x, double logp) override;
  double step_size() const { return eps_; }

 private:
  SamplerSpec spec_;
  Vector inv_mass_;
  Vector grad_;
  bool grad_valid_ = false;
  double eps_;
  DualAveraging adapt_;
};

class Nuts : public PointSampler {
 public:
  Nuts(const SamplerSpec& spec, BlackBoxView& view, const ChainInit& init, std::uint64_t seed);
  void step() override;
  void end_adaptation() override;
  std::vector<double> tuning() const override { return {eps_}; }
  void set_state(const Vector& x, double logp) override;
  double step_size() const { return eps_; }
  int last_depth() const { return depth_; }
  double last_accept_stat() const { return last_accept_stat_; }

 private:
  bool build_tree(int depth, PhasePoint& z, PhasePoint& z_propose, Vector& p_sharp_beg,
                  Vector& p_sharp_end, Vector& rho, Vector& p_beg, Vector& p_end, double h0,
                  double sign, int& n_leapfrog, double& log_sum_weight, double& sum_metro_prob);
  void evolve(PhasePoint& z, double eps);
  void find_reasonable_step_size();
  void ensure_gradient();

  SamplerSpec spec_;
  Vector inv_mass_;
  Vector grad_;
  bool grad_valid_ = false;
  double eps_ = 1.0;
  DualAveraging adapt_;
  bool divergent_ = false;
  int depth_ = 0;
  double last_accept_stat_ = 0.0;
};

class SliceSampler : public PointSampler {
 public:
  SliceSampler(const SamplerSpec& spec, BlackBoxView& view, const ChainInit& init,
               std::uint64_t seed);
  /// One full coordinate sweep.
  void step() override;
  void end_adaptation() override { adapting_ = false; }
  std::vector<double> tuning() const override;

 private:
  Vector width_;
  int max_steps_out_;
};

class Emcee : public Sampler {
 public:
  Emcee(const SamplerSpec& spec, BlackBoxView& view, const ChainInit& init, std::uint64_t seed);
  /// One red-black sweep of stretch moves over all walkers.
  void step() override;
  std::span<const Vector> emitted() const override { return walkers_; }
  void end_adaptation() override { adapting_ = false; }
  std::vector<double> tuning() const override { return {a_}; }
  const std::vector<Vector>& walkers() const { return walkers_; }
  const std::vector<double>& walker_logp() const { return logp_; }
  /// Accept/reject decisions of the most recent sweep, in update order.
  const std::vector<char>& last_decisions() const { return decisions_; }

 private:
  void check_collapse() const;

  BlackBoxView& view_;
  double a_;
  std::vector<Vector> walkers_;
  std::vector<double> logp_;
  std::vector<char> decisions_;
  Rng rng_;
};

class MixSampler : public PointSampler {
 public:
  MixSampler(const SamplerSpec& spec, BlackBoxView& view, const ChainInit& init,
             std::uint64_t seed);
  void step() override;
  void end_adaptation() override;
  std::vector<double> tuning() const override;
  const PointSampler& component(std::size_t i) const { return *components_[i]; }

 private:
  std::vector<std::unique_ptr<PointSampler>> components_;
  std::vector<double> cumulative_;
  Rng selector_;
};

std::unique_ptr<PointSampler> make_point_sampler(const SamplerSpec& spec, BlackBoxView& view,
                                                 const ChainInit& init, std::uint64_t seed);
std::unique_ptr<Sampler> make_sampler(const SamplerSpec& spec, BlackBoxView& view,
                                      const ChainInit& init, std::uint64_t seed);

// ---- template definitions ------------------------------------------------

inline constexpr double kSliceCollapse = 1e-12;

template <class LogF>
SliceDraw slice_sample_1d(LogF&& logf, double x0, double logp0, double log_y, double width,
                          int max_steps_out, Rng& rng) {
  int evals = 0;
  double left = x0 - width * uniform01(rng);
  double right = left + width;
  int j = static_cast<int>(std::floor(max_steps_out * uniform01(rng)));
  int k = max_steps_out - 1 - j;
  while (j > 0) {
    ++evals;
    if (!(logf(left) > log_y)) break;
    left -= width;
    --j;
  }
  while (k > 0) {
    ++evals;
    if (!(logf(right) > log_y)) break;
    right += width;
    --k;
  }
  for (;;) {
    const double x1 = left + uniform01(rng) * (right - left);
    const double lp = logf(x1);
    ++evals;
    if (lp > log_y) return {x1, lp, false, evals};
    if (x1 < x0) {
      left = x1;
    } else {
      right = x1;
    }
    if (right - left < kSliceCollapse) return {x0, logp0, true, evals};
  }
}

}  // namespace mcbench
