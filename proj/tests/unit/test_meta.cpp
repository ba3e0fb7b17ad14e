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
#include <numbers>
#include <set>

#include <gtest/gtest.h>

#include "mcbench/error.hpp"
#include "mcbench/meta.hpp"
#include "mcbench/rng.hpp"
#include "oracles.hpp"

namespace mcbench {
namespace {

ScoreRow mean_row(const std::string& ex, const std::string& s, int dim, double ess, double gr,
                  double gw, double essd, bool flagged = false) {
  ScoreRow r;
  r.example = ex;
  r.sampler = s;
  r.checkpoint = 5;
  r.kind = EstimatorKind::mean_d;
  r.dim = dim;
  r.ess = ess;
  r.gelman_rubin = gr;
  r.geweke = gw;
  r.essd = essd;
  r.essd_flagged = flagged;
  return r;
}

// Synthetic dataset: `examples` x `samplers` rows, features drawn iid, target
// either pure noise or a function of log ESS.
MetaDataset synthetic(int examples, int samplers, bool signal, std::uint64_t seed) {
  Rng rng(seed);
  MetaDataset d;
  for (int e = 0; e < examples; ++e) {
    for (int s = 0; s < samplers; ++s) {
      MetaRow r;
      r.example = "ex" + std::to_string(e);
      r.sampler = "s" + std::to_string(s);
      for (double& f : r.features) f = standard_normal(rng);
      r.features[feature_dim] = 1 + e % 5;
      const double noise = standard_normal(rng);
      r.target = signal ? 2.0 * std::sin(1.5 * r.features[feature_log_ess]) + 0.3 * noise : noise;
      d.rows.push_back(r);
    }
  }
  return d;
}

const ModelResult& find(const std::vector<ModelResult>& rs, const std::string& m) {
  for (const auto& r : rs) {
    if (r.method == m) return r;
  }
  throw std::runtime_error("missing " + m);
}

TEST(MetaFeatures, FloorAndLogs) {
  const auto f = meta_features(100.0, 1.0, 0.0, 7);
  EXPECT_NEAR(f[feature_log_ess], 4.6052, 1e-4);
  EXPECT_DOUBLE_EQ(f[feature_log_gr], std::log(1e-12));
  EXPECT_DOUBLE_EQ(f[feature_log_geweke], std::log(1e-12));
  EXPECT_DOUBLE_EQ(f[feature_dim], 7.0);
  const auto g = meta_features(1.0, 0.9, -2.0, 1);
  EXPECT_DOUBLE_EQ(g[feature_log_gr], std::log(0.1));
  EXPECT_DOUBLE_EQ(g[feature_log_geweke], std::log(2.0));
}

TEST(BuildMetaDataset, OneRowPerPairMinusExclusions) {
  ScoreTable t;
  for (int e = 0; e < 3; ++e) {
    for (int s = 0; s < 2; ++s) {
      const auto ex = "e" + std::to_string(e), sa = "s" + std::to_string(s);
      for (int d = 0; d < 3; ++d) t.push_back(mean_row(ex, sa, d, 10.0 * (d + 1), 1.1, 0.5, -d));
      ScoreRow early = mean_row(ex, sa, 0, 1.0, 5.0, 9.0, 3.0);
      early.checkpoint = 1;
      t.push_back(early);
      ScoreRow ks = mean_row(ex, sa, 0, 1.0, 5.0, 9.0, 3.0);
      ks.kind = EstimatorKind::ks_d;
      t.push_back(ks);
    }
  }
  // Every dimension of (e2, s1) flagged.
  for (auto& r : t) {
    if (r.example == "e2" && r.sampler == "s1") r.essd_flagged = true;
  }
  const auto data = build_meta_dataset(t);
  EXPECT_EQ(data.rows.size(), 3u * 2u - 1u);
  EXPECT_EQ(data.excluded, 1u);
  const auto& r = data.rows.front();
  EXPECT_DOUBLE_EQ(r.features[feature_log_ess], std::log(20.0));
  EXPECT_DOUBLE_EQ(r.target, -1.0);
  EXPECT_DOUBLE_EQ(r.features[feature_dim], 3.0);
  EXPECT_EQ(data.features().rows(), 5);
  EXPECT_EQ(data.targets().size(), 5);
}

TEST(SplitByExample, SizesPartitionDeterminism) {
  const auto d = synthetic(10, 3, false, 1);
  const auto [train, test] = split_by_example(d, 0.2, 5);
  std::set<std::string> a, b;
  for (const auto& r : train.rows) a.insert(r.example);
  for (const auto& r : test.rows) b.insert(r.example);
  EXPECT_EQ(b.size(), 2u);
  EXPECT_EQ(a.size(), 8u);
  for (const auto& e : b) EXPECT_FALSE(a.count(e));
  EXPECT_EQ(train.rows.size() + test.rows.size(), d.rows.size());
  const auto [train2, test2] = split_by_example(d, 0.2, 5);
  ASSERT_EQ(test2.rows.size(), test.rows.size());
  for (std::size_t i = 0; i < test.rows.size(); ++i) EXPECT_EQ(test.rows[i].example, test2.rows[i].example);
  EXPECT_THROW(split_by_example(synthetic(4, 2, false, 1), 0.2, 5), ContractViolation);
}

TEST(Gp, ZeroTargetsPredictZero) {
  Rng rng(3);
  Matrix x(20, 2);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = standard_normal(rng);
  const auto gp = GpModel::fit(x, Vector::Zero(20));
  const auto [m, v] = gp.predict(x * 1.3);
  EXPECT_LT(m.cwiseAbs().maxCoeff(), 1e-6);
  EXPECT_TRUE((v.array() > 0.0).all());
}

TEST(Gp, InterpolatesSine) {
  Matrix x(30, 1);
  Vector y(30);
  for (int i = 0; i < 30; ++i) {
    x(i, 0) = 2.0 * std::numbers::pi * i / 29.0;
    y[i] = std::sin(x(i, 0));
  }
  const auto gp = GpModel::fit(x, y);
  EXPECT_GE(gp.log_marginal_likelihood(), gp.initial_log_marginal_likelihood());
  Matrix grid(200, 1);
  for (int i = 0; i < 200; ++i) grid(i, 0) = 2.0 * std::numbers::pi * (i + 0.5) / 200.0;
  const Vector m = gp.predict(grid).first;
  for (int i = 0; i < 200; ++i) EXPECT_LT(std::abs(m[i] - std::sin(grid(i, 0))), 1e-2) << grid(i, 0);
}

// Dense reference: k*^T (K + s_n^2 I)^-1 y and k** + s_n^2 - k*^T (K + s_n^2 I)^-1 k*,
// with plain nested loops for the kernel and a full-pivot LU for the solve.
TEST(Gp, MatchesDenseSolveOnFewPoints) {
  Rng rng(11);
  const int n = 5, p = 3;
  Matrix x(n, p);
  Vector y(n);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = standard_normal(rng);
  for (int i = 0; i < n; ++i) y[i] = standard_normal(rng);
  Vector theta(p + 2);
  theta << 0.3, -0.2, 0.5, 0.1, -1.5;
  const auto gp = GpModel::with_hyperparameters(x, y, theta);
  const Matrix xs = gp.scaler().apply(x);
  Matrix q(4, p);
  for (Eigen::Index i = 0; i < q.size(); ++i) q.data()[i] = standard_normal(rng);
  const Matrix qs = gp.scaler().apply(q);
  auto k = [&](const Eigen::RowVectorXd& a, const Eigen::RowVectorXd& b) {
    double r2 = 0.0;
    for (int f = 0; f < p; ++f) r2 += std::pow((a[f] - b[f]) / std::exp(theta[f]), 2);
    return std::exp(2.0 * theta[p]) * std::exp(-0.5 * r2);
  };
  const double noise2 = std::exp(2.0 * theta[p + 1]);
  Matrix kk(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) kk(i, j) = k(xs.row(i), xs.row(j)) + (i == j ? noise2 : 0.0);
  }
  const Vector yc = y.array() - y.mean();
  const auto [m, v] = gp.predict(q);
  for (int r = 0; r < 4; ++r) {
    Vector ks(n);
    for (int i = 0; i < n; ++i) ks[i] = k(qs.row(r), xs.row(i));
    const Vector a = kk.fullPivLu().solve(ks);
    EXPECT_NEAR(m[r], y.mean() + a.dot(yc), 1e-8);
    EXPECT_NEAR(v[r], k(qs.row(r), qs.row(r)) + noise2 - a.dot(ks), 1e-8);
  }
}

TEST(Gp, InterpolatesTrainingPointsAndRevertsToPrior) {
  Matrix x(6, 1);
  x << -1, -0.5, 0, 0.4, 0.9, 1.3;
  const Vector y = x.col(0).array().cube();
  Vector theta(3);
  theta << 0.0, 0.0, -9.0;
  const auto gp = GpModel::with_hyperparameters(x, y, theta);
  EXPECT_LT((gp.predict(x).first - y).cwiseAbs().maxCoeff(), 1e-4);
  Matrix far(1, 1);
  far << 1e6;
  const auto [m, v] = gp.predict(far);
  EXPECT_NEAR(v[0], std::exp(0.0) + std::exp(-18.0), 1e-9);
  EXPECT_NEAR(m[0], y.mean(), 1e-9);
}

TEST(Gp, MarginalLikelihoodGradient) {
  Rng rng(17);
  Matrix x(25, 3);
  Vector y(25);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = standard_normal(rng);
  for (int i = 0; i < 25; ++i) y[i] = std::sin(x(i, 0)) + 0.2 * standard_normal(rng);
  for (int trial = 0; trial < 5; ++trial) {
    Vector theta(5);
    for (int j = 0; j < 5; ++j) theta[j] = 0.6 * standard_normal(rng);
    theta[4] -= 1.0;
    Vector g;
    gp_log_marginal_likelihood(x, y, theta, &g);
    for (int j = 0; j < 5; ++j) {
      const double h = 1e-5;
      Vector tp = theta, tm = theta;
      tp[j] += h;
      tm[j] -= h;
      const double fd = (gp_log_marginal_likelihood(x, y, tp) - gp_log_marginal_likelihood(x, y, tm)) / (2 * h);
      EXPECT_NEAR(g[j], fd, 1e-4 * std::max(1.0, std::abs(fd))) << trial << ' ' << j;
    }
  }
}

TEST(Gp, FitNeedsTenRows) {
  EXPECT_THROW(GpModel::fit(Matrix::Zero(5, 2), Vector::Zero(5)), ContractViolation);
}

TEST(PairedTTest, Branches) {
  const std::vector<double> a{1, 2, 3};
  auto t = paired_t_test(a, a);
  EXPECT_DOUBLE_EQ(t.p, 1.0);
  EXPECT_FALSE(t.flagged);
  t = paired_t_test({2, 3, 4}, a);
  EXPECT_TRUE(t.flagged);
  EXPECT_LT(t.p, 1e-12);
  EXPECT_THROW(paired_t_test({1.0}, {2.0}), ContractViolation);
  EXPECT_THROW(paired_t_test({1.0, 2.0}, {2.0}), ContractViolation);
}

TEST(PairedTTest, MatchesIndependentTDistribution) {
  const std::vector<double> a{30.02, 29.99, 30.11, 29.97, 30.01, 29.99};
  const std::vector<double> b{29.89, 29.93, 29.72, 29.98, 30.02, 29.98};
  std::vector<double> d;
  for (std::size_t i = 0; i < a.size(); ++i) d.push_back(a[i] - b[i]);
  const double n = double(d.size());
  const double sd = std::sqrt(oracle::variance(d) * n / (n - 1));
  const double t = oracle::mean(d) / (sd / std::sqrt(n));
  const double p = 2.0 * oracle::student_t_cdf(-std::abs(t), n - 1);
  const auto r = paired_t_test(a, b);
  EXPECT_NEAR(r.t, t, 1e-12);
  EXPECT_NEAR(r.p, p, 1e-10);
}

TEST(EvaluateModels, IidBaselineClosedForm) {
  const auto [train, test] = split_by_example(synthetic(20, 4, false, 2), 0.2, 1);
  const auto results = evaluate_models(train, test, {2, 100, 0});
  ASSERT_EQ(results.size(), 7u);
  const Vector ytr = train.targets(), yte = test.targets();
  const double mu = ytr.mean();
  const double mse = (yte.array() - mu).square().mean();
  EXPECT_NEAR(find(results, "iid").mse, mse, 1e-12);
  for (const auto& r : results) {
    EXPECT_EQ(r.sq_errors.size(), std::size_t(yte.size())) << r.method;
    EXPECT_EQ(r.nlls.size(), std::size_t(yte.size())) << r.method;
    EXPECT_TRUE(std::isfinite(r.nll)) << r.method;
  }
  EXPECT_DOUBLE_EQ(find(results, "GP").nll_delta, 0.0);
}

TEST(EvaluateModels, NullDataGpNoBetterThanIid) {
  const auto [train, test] = split_by_example(synthetic(60, 5, false, 8), 0.2, 3);
  const auto results = evaluate_models(train, test, {2, 100, 0});
  const auto& iid = find(results, "iid");
  // The GP gains nothing on features that carry no signal.
  EXPECT_GT(iid.nll_test.p, 0.01);
  EXPECT_LT(std::abs(iid.nll_delta), 0.1);
}

TEST(EvaluateModels, SignalDataNeedsEss) {
  const auto [train, test] = split_by_example(synthetic(60, 5, true, 9), 0.2, 3);
  ASSERT_GE(test.rows.size() + train.rows.size(), 200u);
  const auto results = evaluate_models(train, test, {2, 100, 0});
  const auto& no_ess = find(results, "GP-ESS");
  EXPECT_GT(no_ess.nll_delta, 0.0);
  EXPECT_LT(no_ess.nll_test.p, 0.05);
  EXPECT_GT(find(results, "iid").nll_delta, 0.0);
  const auto csv = meta_results_csv(results);
  EXPECT_NE(csv.find("GP-GR"), std::string::npos);
}

}  // namespace
}  // namespace mcbench
