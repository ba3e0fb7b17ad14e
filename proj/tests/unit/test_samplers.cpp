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
#include <memory>
#include <numeric>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "mcbench/diagnostics.hpp"
#include "mcbench/error.hpp"
#include "mcbench/samplers.hpp"
#include "oracles.hpp"

namespace mcbench {
namespace {

using Density = std::shared_ptr<const BenchmarkDensity>;

Density shared(const std::string& name) {
  return std::make_shared<const BenchmarkDensity>(bundled_density(name));
}

Density gaussian_1d() { return shared("gauss-1d"); }

ChainInit point_init(const Vector& x, const Vector& scale) { return {{x}, scale}; }

ChainInit init_for(const BenchmarkDensity& d, const SamplerSpec& spec, std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t n = spec.kind == SamplerKind::emcee ? spec.walker_count(d.dim()) : 1;
  return init_chain(InitMode::exact_sample, d, rng, n);
}

// Post-adaptation trajectory of one point (walker 0 for emcee).
Matrix run(Sampler& s, int dim, int adapt, int keep) {
  for (int i = 0; i < adapt; ++i) s.step();
  s.end_adaptation();
  Matrix out(keep, dim);
  for (int i = 0; i < keep; ++i) {
    s.step();
    out.row(i) = s.emitted()[0].transpose();
  }
  return out;
}

double ks_p_thinned(const Matrix& chain, const BenchmarkDensity& d, int k) {
  const std::span<const double> col(chain.col(k).data(), chain.rows());
  const double e = ess(col);
  const auto stride = std::max<std::size_t>(10, static_cast<std::size_t>(std::ceil(chain.rows() / e)));
  std::vector<double> thin;
  for (Eigen::Index i = 0; i < chain.rows(); i += stride) thin.push_back(chain(i, k));
  return oracle::ks_pvalue(thin, [&](double a) { return d.marginal_cdf(k, a); });
}

TEST(MhAccept, Extremes) {
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    EXPECT_TRUE(mh_accept(0.0, rng));
    EXPECT_FALSE(mh_accept(-INFINITY, rng));
    EXPECT_FALSE(mh_accept(std::nan(""), rng));
  }
}

TEST(MhAccept, EmpiricalRate) {
  Rng rng(2);
  const int n = 100000;
  int acc = 0;
  for (int i = 0; i < n; ++i) acc += mh_accept(std::log(0.3), rng);
  EXPECT_LT(std::abs(acc / double(n) - 0.3), 4.0 * std::sqrt(0.21 / n));
}

TEST(Rwm, ZeroScaleIsConstant) {
  auto d = gaussian_1d();
  BlackBoxView view(d);
  RandomWalkMetropolis rwm(SamplerSpec::defaults(SamplerKind::rwm_gauss), view,
                           point_init(Vector::Constant(1, 0.7), Vector::Zero(1)), 3);
  for (int i = 0; i < 200; ++i) {
    rwm.step();
    EXPECT_EQ(rwm.position()[0], 0.7);
  }
  EXPECT_EQ(rwm.stats().accepted, 200u);
}

TEST(Rwm, OneDimensionalAcceptanceAtScale24) {
  auto d = gaussian_1d();
  BlackBoxView view(d);
  RandomWalkMetropolis rwm(SamplerSpec::defaults(SamplerKind::rwm_gauss), view,
                           point_init(Vector::Zero(1), Vector::Constant(1, 2.4 / 2.38)), 4);
  rwm.end_adaptation();
  EXPECT_NEAR(rwm.proposal_scale()[0], 2.4, 1e-12);
  for (int i = 0; i < 50000; ++i) rwm.step();
  const double rate = rwm.stats().accepted / double(rwm.stats().proposals);
  EXPECT_GT(rate, 0.35);
  EXPECT_LT(rate, 0.55);
}

double kurtosis(const std::vector<double>& x) {
  const double m = oracle::mean(x);
  double m2 = 0.0, m4 = 0.0;
  for (double v : x) {
    m2 += (v - m) * (v - m);
    m4 += std::pow(v - m, 4);
  }
  m2 /= x.size();
  m4 /= x.size();
  return m4 / (m2 * m2);
}

TEST(Rwm, CauchyIncrementsAreHeavyTailed) {
  Rng rng(5);
  std::vector<double> cauchy, gauss, laplace;
  for (int i = 0; i < 100000; ++i) {
    cauchy.push_back(draw_increment(RwmFamily::cauchy, 1, rng)[0]);
    gauss.push_back(draw_increment(RwmFamily::gauss, 1, rng)[0]);
    laplace.push_back(draw_increment(RwmFamily::laplace, 1, rng)[0]);
  }
  EXPECT_GT(kurtosis(cauchy), 100.0);
  EXPECT_NEAR(kurtosis(gauss), 3.0, 0.2);
  EXPECT_NEAR(kurtosis(laplace), 6.0, 1.0);
  const std::vector<double> head(cauchy.begin(), cauchy.begin() + 1000);
  EXPECT_GT(kurtosis(cauchy), kurtosis(head));
}

TEST(Rwm, ProposalDensityIsSymmetric) {
  Vector scale(2);
  scale << 0.5, 3.0;
  Vector delta(2);
  delta << 0.3, -1.1;
  for (auto f : {RwmFamily::gauss, RwmFamily::cauchy, RwmFamily::laplace}) {
    EXPECT_DOUBLE_EQ(proposal_log_density(f, delta, scale), proposal_log_density(f, -delta, scale));
  }
  EXPECT_NEAR(proposal_log_density(RwmFamily::gauss, Vector::Zero(1), Vector::Ones(1)),
              -0.5 * std::log(2.0 * std::numbers::pi), 1e-15);
}

TEST(RwmAdaptation, UpdateRule) {
  RwmAdaptation a{Vector::Zero(3), 0};
  adapt_rwm_scale(a, 0.234);
  EXPECT_EQ(a.log_scale, Vector::Zero(3));
  adapt_rwm_scale(a, 1.0);
  EXPECT_GT(a.log_scale.minCoeff(), 0.0);
  const double before = a.log_scale[0];
  adapt_rwm_scale(a, 0.0);
  EXPECT_LT(a.log_scale[0], before);
}

TEST(RwmAdaptation, TenDimensionalAcceptance) {
  auto d = shared("gauss-10d");
  BlackBoxView view(d);
  const auto spec = SamplerSpec::defaults(SamplerKind::rwm_gauss);
  RandomWalkMetropolis rwm(spec, view, point_init(Vector::Zero(10), Vector::Constant(10, 5.0)), 6);
  for (int i = 0; i < 5000; ++i) rwm.step();
  rwm.end_adaptation();
  const auto before = rwm.stats().accepted;
  for (int i = 0; i < 20000; ++i) rwm.step();
  const double rate = (rwm.stats().accepted - before) / 20000.0;
  EXPECT_GT(rate, 0.1);
  EXPECT_LT(rate, 0.5);
}

// pi(x) T(x -> y) = pi(y) T(y -> x) pointwise, T being proposal density
// times acceptance probability.
TEST(Rwm, DetailedBalanceOnGrid) {
  auto d = gaussian_1d();
  BlackBoxView view(d);
  const Vector scale = Vector::Constant(1, 1.3);
  std::vector<double> grid, logp;
  for (int i = 0; i < 41; ++i) {
    grid.push_back(-4.0 + 0.2 * i);
    logp.push_back(view.log_density(Vector::Constant(1, grid.back())));
  }
  double worst = 0.0;
  for (int i = 0; i < 41; ++i) {
    for (int j = 0; j < 41; ++j) {
      if (i == j) continue;
      auto flow = [&](int a, int b) {
        const Vector delta = Vector::Constant(1, grid[b] - grid[a]);
        return std::exp(logp[a] + proposal_log_density(RwmFamily::gauss, delta, scale)) *
               mh_accept_probability(logp[b] - logp[a]);
      };
      const double f = flow(i, j), g = flow(j, i);
      worst = std::max(worst, std::abs(f - g) / std::max(f, g));
    }
  }
  EXPECT_LT(worst, 1e-8);
}

TEST(Leapfrog, ZeroStepsIsIdentity) {
  auto d = shared("corr-2d");
  BlackBoxView view(d);
  Vector x(2), p(2);
  x << 0.3, 4.0;
  p << -1.0, 0.5;
  const auto r = leapfrog(x, p, 0.1, 0, Vector::Ones(2), view);
  EXPECT_EQ(r.x, x);
  EXPECT_EQ(r.p, p);
  EXPECT_EQ(view.evaluations(), 0u);
}

TEST(Leapfrog, Reversible) {
  auto d = shared("mog2-2d");
  BlackBoxView view(d);
  Vector x(2), p(2), m(2);
  x << 1.0, -3.0;
  p << 0.7, -0.4;
  m << 4.0, 0.25;
  const auto fwd = leapfrog(x, p, 0.05, 40, m, view);
  const auto back = leapfrog(fwd.x, -fwd.p, 0.05, 40, m, view);
  EXPECT_LT((back.x - x).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LT((-back.p - p).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Leapfrog, SecondOrderEnergyError) {
  auto d = gaussian_1d();
  BlackBoxView view(d);
  auto max_dh = [&](double eps) {
    const int steps = static_cast<int>(std::lround(3.0 / eps));
    Vector x = Vector::Constant(1, 1.0), p = Vector::Constant(1, 0.5);
    const double h0 = -view.log_density(x) + 0.5 * p.squaredNorm();
    double worst = 0.0;
    for (int i = 0; i < steps; ++i) {
      const auto r = leapfrog(x, p, eps, 1, Vector::Ones(1), view);
      x = r.x;
      p = r.p;
      worst = std::max(worst, std::abs(-view.log_density(x) + 0.5 * p.squaredNorm() - h0));
    }
    return worst;
  };
  for (double eps : {0.2, 0.1, 0.05}) {
    const double ratio = max_dh(eps) / max_dh(eps / 2);
    EXPECT_GT(ratio, 3.5) << eps;
    EXPECT_LT(ratio, 4.5) << eps;
  }
}

TEST(Hmc, TinyStepAlwaysAccepts) {
  auto d = gaussian_1d();
  BlackBoxView view(d);
  auto spec = SamplerSpec::defaults(SamplerKind::hmc);
  spec.step_size = 1e-5;
  spec.leapfrog_steps = 1;
  Hmc hmc(spec, view, point_init(Vector::Constant(1, 0.5), Vector::Ones(1)), 7);
  hmc.end_adaptation();
  for (int i = 0; i < 2000; ++i) hmc.step();
  EXPECT_EQ(hmc.stats().accepted, 2000u);
}

TEST(Hmc, TenDimensionalMeans) {
  auto d = shared("gauss-10d");
  BlackBoxView view(d);
  const auto spec = SamplerSpec::defaults(SamplerKind::hmc);
  Hmc hmc(spec, view, init_for(*d, spec, 8), 8);
  const Matrix x = run(hmc, 10, 1000, 10000);
  for (int k = 0; k < 10; ++k) {
    const std::span<const double> col(x.col(k).data(), x.rows());
    EXPECT_LT(std::abs(x.col(k).mean()), 4.0 * std::sqrt(1.0 / ess(col))) << k;
  }
}

TEST(Nuts, DepthOneIsSingleLeapfrog) {
  auto d = gaussian_1d();
  BlackBoxView view(d);
  auto spec = SamplerSpec::defaults(SamplerKind::nuts);
  spec.max_tree_depth = 1;
  Nuts nuts(spec, view, point_init(Vector::Constant(1, 0.2), Vector::Ones(1)), 9);
  nuts.end_adaptation();
  for (int i = 0; i < 100; ++i) {
    const auto before = view.evaluations();
    nuts.step();
    EXPECT_LE(nuts.last_depth(), 1);
    EXPECT_EQ(view.evaluations() - before, 2u);
  }
}

TEST(Nuts, AcceptStatNearTarget) {
  auto d = gaussian_1d();
  BlackBoxView view(d);
  const auto spec = SamplerSpec::defaults(SamplerKind::nuts);
  Nuts nuts(spec, view, point_init(Vector::Zero(1), Vector::Ones(1)), 10);
  for (int i = 0; i < 2000; ++i) nuts.step();
  nuts.end_adaptation();
  double sum = 0.0;
  for (int i = 0; i < 5000; ++i) {
    nuts.step();
    sum += nuts.last_accept_stat();
  }
  EXPECT_NEAR(sum / 5000.0, 0.8, 0.1);
}

TEST(Nuts, CorrelatedGaussianMarginals) {
  auto d = shared("corr-2d");
  BlackBoxView view(d);
  const auto spec = SamplerSpec::defaults(SamplerKind::nuts);
  Nuts nuts(spec, view, init_for(*d, spec, 11), 11);
  const Matrix x = run(nuts, 2, 1000, 100000);
  for (int k = 0; k < 2; ++k) EXPECT_GT(ks_p_thinned(x, *d, k), 0.01) << k;
}

TEST(Slice, BracketAtHighLevelStaysNearMode) {
  auto d = gaussian_1d();
  BlackBoxView view(d);
  auto logf = [&](double a) { return view.log_density(Vector::Constant(1, a)); };
  const double top = logf(0.0);
  Rng rng(12);
  for (int i = 0; i < 500; ++i) {
    const auto s = slice_sample_1d(logf, 0.0, top, top - 1e-4, 1.0, 50, rng);
    EXPECT_LT(std::abs(s.x), std::sqrt(2e-4) + 1e-12);
    EXPECT_FALSE(s.stalled);
  }
}

TEST(Slice, OneDimensionalKs) {
  auto d = gaussian_1d();
  BlackBoxView view(d);
  const auto spec = SamplerSpec::defaults(SamplerKind::slice);
  SliceSampler slice(spec, view, point_init(Vector::Zero(1), Vector::Ones(1)), 13);
  const Matrix x = run(slice, 1, 0, 10000);
  std::vector<double> v(x.data(), x.data() + x.rows());
  EXPECT_GT(oracle::ks_pvalue(v, oracle::normal_cdf), 0.01);
}

TEST(Slice, FirstUpdateIsSignSymmetric) {
  auto d = gaussian_1d();
  const auto spec = SamplerSpec::defaults(SamplerKind::slice);
  const int n = 4000;
  int positive = 0;
  for (int s = 0; s < n; ++s) {
    BlackBoxView view(d);
    SliceSampler slice(spec, view, point_init(Vector::Zero(1), Vector::Ones(1)), 1000 + s);
    slice.step();
    positive += slice.position()[0] > 0.0;
  }
  EXPECT_LT(std::abs(positive / double(n) - 0.5), 4.0 * std::sqrt(0.25 / n));
}

TEST(Emcee, UnitStretchFreezesEnsemble) {
  auto d = shared("corr-2d");
  BlackBoxView view(d);
  auto spec = SamplerSpec::defaults(SamplerKind::emcee);
  spec.stretch = 1.0;
  const auto init = init_for(*d, spec, 14);
  Emcee e(spec, view, init, 14);
  for (int i = 0; i < 50; ++i) e.step();
  for (std::size_t k = 0; k < e.walkers().size(); ++k) EXPECT_EQ(e.walkers()[k], init.points[k]);
  EXPECT_EQ(e.stats().accepted, e.stats().proposals);
}

TEST(Emcee, AffineEquivariance) {
  const auto base = bundled_density("mog2-2d");
  Matrix a(2, 2);
  a << 2.0, 0.7, -0.4, 1.5;
  Vector b(2);
  b << -3.0, 10.0;
  // Image of the target under y = A x + b, built component by component.
  const auto& core = base.core();
  const auto& t = base.destandardize();
  std::vector<Vector> means;
  std::vector<Matrix> chol;
  for (int c = 0; c < core.components(); ++c) {
    const Matrix l = t.scale.asDiagonal() * core.chol_factors()[c];
    means.push_back(a * (t.scale.cwiseProduct(core.means()[c]) + t.shift) + b);
    const Matrix cov = a * l * l.transpose() * a.transpose();
    chol.push_back(Eigen::LLT<Matrix>(cov).matrixL());
  }
  auto image = std::make_shared<const BenchmarkDensity>(
      "image", MixtureOfGaussians(core.weights(), means, chol), AffineTransform::identity(2));
  auto src = std::make_shared<const BenchmarkDensity>(base);
  const auto spec = SamplerSpec::defaults(SamplerKind::emcee);
  auto init = init_for(*src, spec, 15);
  ChainInit mapped = init;
  for (auto& x : mapped.points) x = a * x + b;
  BlackBoxView v1(src), v2(image);
  Emcee e1(spec, v1, init, 15), e2(spec, v2, mapped, 15);
  // Rounding differences grow geometrically under repeated stretches, so the
  // comparison covers a horizon where they stay far below decision margins.
  for (int i = 0; i < 100; ++i) {
    e1.step();
    e2.step();
    ASSERT_EQ(e1.last_decisions(), e2.last_decisions()) << "sweep " << i;
  }
  for (std::size_t k = 0; k < e1.walkers().size(); ++k) {
    EXPECT_LT((a * e1.walkers()[k] + b - e2.walkers()[k]).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(Emcee, PooledMeanTwoDimensions) {
  auto d = std::make_shared<const BenchmarkDensity>(
      "n2", MixtureOfGaussians(Vector::Ones(1), {Vector::Zero(2)}, {Matrix::Identity(2, 2)}),
      AffineTransform::identity(2));
  BlackBoxView view(d);
  auto spec = SamplerSpec::defaults(SamplerKind::emcee);
  const auto init = init_for(*d, spec, 16);
  ASSERT_EQ(init.points.size(), 10u);
  Emcee e(spec, view, init, 16);
  const int sweeps = 10000;
  std::vector<std::vector<double>> w(10, std::vector<double>()), w2(10);
  for (int i = 0; i < sweeps; ++i) {
    e.step();
    for (int k = 0; k < 10; ++k) {
      w[k].push_back(e.walkers()[k][0]);
      w2[k].push_back(e.walkers()[k][1]);
    }
  }
  for (const auto* dim : {&w, &w2}) {
    double sum = 0.0, ess_total = 0.0;
    for (const auto& c : *dim) {
      sum += std::accumulate(c.begin(), c.end(), 0.0);
      ess_total += ess(c);
    }
    EXPECT_LT(std::abs(sum / (10.0 * sweeps)), 4.0 / std::sqrt(ess_total));
  }
}

TEST(Emcee, CollapseRaises) {
  auto d = shared("corr-2d");
  BlackBoxView view(d);
  const auto spec = SamplerSpec::defaults(SamplerKind::emcee);
  ChainInit init{std::vector<Vector>(10, d->ground_truth_mean()), Vector::Ones(2)};
  EXPECT_THROW(Emcee(spec, view, init, 17), WalkerCollapse);
}

TEST(Mix, DegenerateWeightsMatchFirstKernel) {
  auto d = shared("corr-2d");
  auto spec = SamplerSpec::defaults(SamplerKind::mix);
  spec.components = {SamplerSpec::defaults(SamplerKind::rwm_gauss), SamplerSpec::defaults(SamplerKind::slice)};
  spec.mix_weights = {1.0, 0.0};
  const auto init = init_for(*d, spec, 18);
  BlackBoxView v1(d), v2(d);
  MixSampler mix(spec, v1, init, 18);
  RandomWalkMetropolis rwm(spec.components[0], v2, init, 18);
  for (int i = 0; i < 3000; ++i) {
    if (i == 600) {
      mix.end_adaptation();
      rwm.end_adaptation();
    }
    mix.step();
    rwm.step();
    ASSERT_EQ(mix.position(), rwm.position()) << i;
  }
  EXPECT_EQ(mix.stats().component_usage[1], 0u);
}

TEST(Mix, UsageCounts) {
  auto d = gaussian_1d();
  BlackBoxView view(d);
  auto spec = SamplerSpec::defaults(SamplerKind::mix);
  spec.mix_weights = {0.5, 0.5};
  MixSampler mix(spec, view, point_init(Vector::Zero(1), Vector::Ones(1)), 19);
  const int n = 10000;
  for (int i = 0; i < n; ++i) mix.step();
  EXPECT_LT(std::abs(mix.stats().component_usage[0] / double(n) - 0.5), 4.0 * std::sqrt(0.25 / n));
}

TEST(InitChain, ExactModeMatchesSampleExact) {
  const auto d = bundled_density("mog8-10d");
  Rng a(20), b(20);
  const auto init = init_chain(InitMode::exact_sample, d, a);
  const Matrix x = d.sample_exact(1, b);
  EXPECT_EQ(init.points[0], Vector(x.row(0).transpose()));
}

TEST(InitChain, ApproxScaleGuess) {
  const BenchmarkDensity d("diag", MixtureOfGaussians(Vector::Ones(1), {Vector::Zero(2)}, {Matrix::Identity(2, 2)}),
                           AffineTransform{Vector{{1.0, 10.0}}, Vector::Zero(2)});
  Rng rng(21);
  const auto init = init_chain(InitMode::approx_fit, d, rng);
  EXPECT_NEAR(init.scale_guess[0], 1.0, 0.2);
  EXPECT_NEAR(init.scale_guess[1], 10.0, 2.0);
}

TEST(InitChain, FinitePointsInBothModes) {
  for (const auto& name : bundled_density_names()) {
    auto d = shared(name);
    BlackBoxView view(d);
    for (auto mode : {InitMode::exact_sample, InitMode::approx_fit}) {
      Rng rng(22);
      const auto init = init_chain(mode, *d, rng, 3);
      ASSERT_EQ(init.points.size(), 3u);
      for (const auto& x : init.points) {
        EXPECT_TRUE(x.allFinite());
        EXPECT_TRUE(std::isfinite(view.log_density(x)));
      }
    }
  }
}

const std::vector<SamplerKind> kAllKinds = {
    SamplerKind::rwm_gauss, SamplerKind::rwm_cauchy, SamplerKind::rwm_laplace, SamplerKind::hmc,
    SamplerKind::nuts,      SamplerKind::slice,      SamplerKind::emcee,       SamplerKind::mix};

class PerKernel : public ::testing::TestWithParam<SamplerKind> {};

TEST_P(PerKernel, OffsetInvariance) {
  auto d = shared("mog2-2d");
  const auto spec = SamplerSpec::defaults(GetParam());
  const auto init = init_for(*d, spec, 23);
  BlackBoxView plain(d), shifted(d, 1234.5);
  auto s1 = make_sampler(spec, plain, init, 23);
  auto s2 = make_sampler(spec, shifted, init, 23);
  s1->end_adaptation();
  s2->end_adaptation();
  for (int i = 0; i < 2000; ++i) {
    s1->step();
    s2->step();
    const auto a = s1->emitted(), b = s2->emitted();
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t k = 0; k < a.size(); ++k) ASSERT_EQ(a[k], b[k]) << "step " << i;
  }
}

TEST_P(PerKernel, AdaptationFreeze) {
  auto d = shared("corr-2d");
  const auto spec = SamplerSpec::defaults(GetParam());
  BlackBoxView view(d);
  auto s = make_sampler(spec, view, init_for(*d, spec, 24), 24);
  for (int i = 0; i < 300; ++i) s->step();
  s->end_adaptation();
  EXPECT_FALSE(s->adapting());
  const auto frozen = s->tuning();
  for (int i = 0; i < 1000; ++i) {
    s->step();
    ASSERT_EQ(s->tuning(), frozen);
  }
}

TEST_P(PerKernel, StationaryOnSmallTargets) {
  for (const std::string name : {"gauss-1d", "mog2-1d", "corr-2d", "mog2-2d"}) {
    auto d = shared(name);
    const auto spec = SamplerSpec::defaults(GetParam());
    BlackBoxView view(d);
    auto s = make_sampler(spec, view, init_for(*d, spec, 25), 25);
    const Matrix x = run(*s, d->dim(), 20000, 100000);
    for (int k = 0; k < d->dim(); ++k) EXPECT_GT(ks_p_thinned(x, *d, k), 0.001) << name << " dim " << k;
  }
}

INSTANTIATE_TEST_SUITE_P(Kernels, PerKernel, ::testing::ValuesIn(kAllKinds),
                         [](const auto& info) { return to_string(info.param); });

}  // namespace
}  // namespace mcbench
