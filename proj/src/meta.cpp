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

#include "mcbench/meta.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include "mcbench/error.hpp"
#include "mcbench/special.hpp"

namespace mcbench {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size();
  return m % 2 ? v[m / 2] : 0.5 * (v[m / 2 - 1] + v[m / 2]);
}

Matrix se_kernel(const Matrix& a, const Matrix& b, const Vector& theta) {
  const Eigen::Index p = a.cols();
  const double s2 = std::exp(2.0 * theta[p]);
  const Vector inv_ls = (-theta.head(p)).array().exp();
  Matrix k(a.rows(), b.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < b.rows(); ++j) {
      double r2 = 0.0;
      for (Eigen::Index f = 0; f < p; ++f) {
        const double d = (a(i, f) - b(j, f)) * inv_ls[f];
        r2 += d * d;
      }
      k(i, j) = s2 * std::exp(-0.5 * r2);
    }
  }
  return k;
}

struct Bounds {
  Vector lo, hi;
};

Bounds theta_bounds(Eigen::Index p, double y_sd) {
  const double ls = std::log(y_sd);
  Bounds b{Vector(p + 2), Vector(p + 2)};
  b.lo.head(p).setConstant(-5.0);
  b.hi.head(p).setConstant(5.0);
  b.lo[p] = ls - 6.0;
  b.hi[p] = ls + 4.0;
  b.lo[p + 1] = ls - 9.0;
  b.hi[p + 1] = ls + 2.0;
  return b;
}

// Solves (L L^T) x = rhs for lower-triangular L.
Matrix chol_solve(const Matrix& l, const Matrix& rhs) {
  const Matrix half = l.triangularView<Eigen::Lower>().solve(rhs);
  return l.transpose().triangularView<Eigen::Upper>().solve(half);
}

Vector clamp(const Vector& v, const Bounds& b) { return v.cwiseMax(b.lo).cwiseMin(b.hi); }

double safe_lml(const Matrix& x, const Vector& y, const Vector& theta, Vector* grad) {
  try {
    const double f = gp_log_marginal_likelihood(x, y, theta, grad);
    return std::isfinite(f) ? f : kNegInf;
  } catch (const NotPositiveDefinite&) {
    return kNegInf;
  }
}

// Box-constrained ascent via theta = lo + (hi - lo) sigmoid(u) and BFGS on u.
struct AscentProblem {
  const Matrix& x;
  const Vector& y;
  const Bounds& b;
  Vector best;
  double best_f = kNegInf;

  Vector theta_of(const gsl_vector* u) const {
    Vector t(b.lo.size());
    for (Eigen::Index i = 0; i < t.size(); ++i) {
      t[i] = b.lo[i] + (b.hi[i] - b.lo[i]) / (1.0 + std::exp(-gsl_vector_get(u, i)));
    }
    return t;
  }

  // Negated log marginal likelihood and its gradient in u.
  double evaluate(const gsl_vector* u, gsl_vector* grad) {
    const Vector theta = theta_of(u);
    Vector g;
    const double f = safe_lml(x, y, theta, grad ? &g : nullptr);
    if (f > best_f) {
      best_f = f;
      best = theta;
    }
    if (!std::isfinite(f)) return std::numeric_limits<double>::max();
    if (grad) {
      for (Eigen::Index i = 0; i < theta.size(); ++i) {
        const double dtheta = (theta[i] - b.lo[i]) * (b.hi[i] - theta[i]) / (b.hi[i] - b.lo[i]);
        gsl_vector_set(grad, i, -g[i] * dtheta);
      }
    }
    return -f;
  }

  static double f(const gsl_vector* u, void* self) { return static_cast<AscentProblem*>(self)->evaluate(u, nullptr); }
  static void df(const gsl_vector* u, void* self, gsl_vector* g) {
    static_cast<AscentProblem*>(self)->evaluate(u, g);
  }
  static void fdf(const gsl_vector* u, void* self, double* f, gsl_vector* g) {
    *f = static_cast<AscentProblem*>(self)->evaluate(u, g);
  }
};

// Maximizes the marginal likelihood from `theta`; returns the best objective
// seen and leaves its argument in `theta`.
double ascend(const Matrix& x, const Vector& y, Vector& theta, const Bounds& b, int max_iters) {
  static const bool quiet = (gsl_set_error_handler_off(), true);
  (void)quiet;
  const auto n = static_cast<std::size_t>(theta.size());
  AscentProblem prob{x, y, b, theta, kNegInf};
  gsl_vector* u = gsl_vector_alloc(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    const double frac = std::clamp((theta[k] - b.lo[k]) / (b.hi[k] - b.lo[k]), 1e-6, 1.0 - 1e-6);
    gsl_vector_set(u, i, std::log(frac / (1.0 - frac)));
  }
  gsl_multimin_function_fdf fn{&AscentProblem::f, &AscentProblem::df, &AscentProblem::fdf, n, &prob};
  gsl_multimin_fdfminimizer* s = gsl_multimin_fdfminimizer_alloc(gsl_multimin_fdfminimizer_vector_bfgs2, n);
  if (gsl_multimin_fdfminimizer_set(s, &fn, u, 0.1, 0.1) == GSL_SUCCESS) {
    // Stop once ten iterations gain less than 1e-3 nats; irrelevant
    // lengthscales otherwise creep toward their bound indefinitely.
    std::vector<double> history{s->f};
    for (int it = 0; it < max_iters; ++it) {
      if (gsl_multimin_fdfminimizer_iterate(s) != GSL_SUCCESS) break;
      if (gsl_multimin_test_gradient(s->gradient, 1e-4) == GSL_SUCCESS) break;
      history.push_back(s->f);
      if (history.size() > 10 && history[history.size() - 11] - s->f < 1e-3) break;
    }
  }
  gsl_multimin_fdfminimizer_free(s);
  gsl_vector_free(u);
  theta = prob.best;
  return prob.best_f;
}

struct Fitted {
  std::vector<double> mean, var;
};

Matrix select_columns(const Matrix& x, const std::vector<int>& cols) {
  Matrix out(x.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) out.col(static_cast<Eigen::Index>(c)) = x.col(cols[c]);
  return out;
}

ModelResult score(const std::string& method, const Vector& y, const Vector& mean, const Vector& var) {
  ModelResult r;
  r.method = method;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double e = y[i] - mean[i];
    r.sq_errors.push_back(e * e);
    r.nlls.push_back(0.5 * std::log(2.0 * std::numbers::pi * var[i]) + 0.5 * e * e / var[i]);
  }
  double s = 0.0, l = 0.0;
  for (std::size_t i = 0; i < r.nlls.size(); ++i) {
    s += r.sq_errors[i];
    l += r.nlls[i];
  }
  r.mse = s / static_cast<double>(y.size());
  r.nll = l / static_cast<double>(y.size());
  return r;
}

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

}  // namespace

std::array<double, kMetaFeatures> meta_features(double ess, double gelman_rubin, double geweke,
                                                int dim) {
  return {std::log(ess), std::log(std::max(std::abs(gelman_rubin - 1.0), kFeatureFloor)),
          std::log(std::max(std::abs(geweke), kFeatureFloor)), static_cast<double>(dim)};
}

Matrix MetaDataset::features() const {
  Matrix x(static_cast<Eigen::Index>(rows.size()), kMetaFeatures);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (int f = 0; f < kMetaFeatures; ++f) x(static_cast<Eigen::Index>(i), f) = rows[i].features[f];
  }
  return x;
}

Vector MetaDataset::targets() const {
  Vector y(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) y[static_cast<Eigen::Index>(i)] = rows[i].target;
  return y;
}

MetaDataset build_meta_dataset(const ScoreTable& table) {
  int final_cp = 0;
  for (const auto& r : table) final_cp = std::max(final_cp, r.checkpoint);
  std::vector<std::pair<std::string, std::string>> order;
  std::map<std::pair<std::string, std::string>, std::vector<const ScoreRow*>> groups;
  for (const auto& r : table) {
    if (r.checkpoint != final_cp || r.kind != EstimatorKind::mean_d) continue;
    const auto key = std::make_pair(r.example, r.sampler);
    if (!groups.count(key)) order.push_back(key);
    groups[key].push_back(&r);
  }
  MetaDataset out;
  for (const auto& key : order) {
    const auto& rows = groups[key];
    const int dim = static_cast<int>(rows.size());
    std::array<std::vector<double>, kMetaFeatures> feats;
    std::vector<double> targets;
    for (const ScoreRow* r : rows) {
      if (r->absent || r->essd_flagged) continue;
      const auto f = meta_features(r->ess, r->gelman_rubin, r->geweke, dim);
      for (int i = 0; i < kMetaFeatures; ++i) feats[i].push_back(f[i]);
      targets.push_back(r->essd);
    }
    if (targets.empty()) {
      ++out.excluded;
      continue;
    }
    MetaRow row{key.first, key.second, {}, median(targets)};
    bool finite = std::isfinite(row.target);
    for (int i = 0; i < kMetaFeatures; ++i) {
      row.features[i] = median(feats[i]);
      finite = finite && std::isfinite(row.features[i]);
    }
    if (!finite) {
      ++out.excluded;
      continue;
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

std::pair<MetaDataset, MetaDataset> split_by_example(const MetaDataset& data, double test_frac,
                                                     std::uint64_t seed) {
  if (!(test_frac > 0.0 && test_frac < 1.0)) throw ContractViolation("test_frac must be in (0,1)");
  std::set<std::string> unique;
  for (const auto& r : data.rows) unique.insert(r.example);
  if (unique.size() < 5) throw ContractViolation("split_by_example: need at least 5 distinct examples");
  std::vector<std::string> ids(unique.begin(), unique.end());
  Rng rng(seed);
  std::shuffle(ids.begin(), ids.end(), rng);
  const auto n_test = static_cast<std::size_t>(std::ceil(test_frac * ids.size() - 1e-9));
  const std::set<std::string> test_ids(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n_test));
  std::pair<MetaDataset, MetaDataset> out;
  for (const auto& r : data.rows) (test_ids.count(r.example) ? out.second : out.first).rows.push_back(r);
  return out;
}

FeatureScaler FeatureScaler::fit(const Matrix& x) {
  FeatureScaler s;
  s.mean = x.colwise().mean().transpose();
  s.std = ((x.rowwise() - s.mean.transpose()).array().square().colwise().mean()).sqrt().transpose();
  for (Eigen::Index f = 0; f < s.std.size(); ++f) {
    if (!(s.std[f] > 0.0)) s.std[f] = 1.0;
  }
  return s;
}

Matrix FeatureScaler::apply(const Matrix& x) const {
  Matrix z = ((x.rowwise() - mean.transpose()).array().rowwise() / std.transpose().array()).matrix();
  return z.cwiseMax(-kWinsorLimit).cwiseMin(kWinsorLimit);
}

double gp_kernel(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b,
                 const Vector& theta) {
  return se_kernel(a.transpose(), b.transpose(), theta)(0, 0);
}

double gp_log_marginal_likelihood(const Matrix& x, const Vector& y, const Vector& theta,
                                  Vector* grad) {
  const Eigen::Index n = x.rows();
  const Eigen::Index p = x.cols();
  if (theta.size() != p + 2) throw ContractViolation("gp: theta must have p + 2 entries");
  const double noise2 = std::exp(2.0 * theta[p + 1]);
  const Matrix kse = se_kernel(x, x, theta);
  Matrix k = kse;
  k.diagonal().array() += noise2;
  const Matrix l = cholesky_with_jitter(k);
  const Vector alpha = chol_solve(l, y);
  const double lml = -0.5 * y.dot(alpha) - l.diagonal().array().log().sum() -
                     0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi);
  if (grad) {
    const Matrix kinv = chol_solve(l, Matrix::Identity(n, n));
    const Matrix w = alpha * alpha.transpose() - kinv;
    grad->resize(p + 2);
    for (Eigen::Index f = 0; f < p; ++f) {
      const double inv_l2 = std::exp(-2.0 * theta[f]);
      double acc = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
          const double d = x(i, f) - x(j, f);
          acc += w(i, j) * kse(i, j) * d * d * inv_l2;
        }
      }
      (*grad)[f] = 0.5 * acc;
    }
    (*grad)[p] = (w.array() * kse.array()).sum();
    (*grad)[p + 1] = noise2 * w.trace();
  }
  return lml;
}

void GpModel::factorize() {
  const Eigen::Index p = x_.cols();
  Matrix k = se_kernel(x_, x_, theta_);
  k.diagonal().array() += std::exp(2.0 * theta_[p + 1]);
  try {
    chol_ = cholesky_with_jitter(k);
  } catch (const NotPositiveDefinite& e) {
    throw FitError(std::string("GP kernel matrix: ") + e.what());
  }
  alpha_ = chol_solve(chol_, y_);
  lml_ = -0.5 * y_.dot(alpha_) - chol_.diagonal().array().log().sum() -
         0.5 * static_cast<double>(y_.size()) * std::log(2.0 * std::numbers::pi);
}

GpModel GpModel::with_hyperparameters(const Matrix& x, const Vector& y, const Vector& theta) {
  if (x.rows() != y.size() || x.rows() == 0) throw ContractViolation("gp: shape mismatch");
  GpModel m;
  m.scaler_ = FeatureScaler::fit(x);
  m.x_ = m.scaler_.apply(x);
  m.y_mean_ = y.mean();
  m.y_ = y.array() - m.y_mean_;
  m.theta_ = theta;
  m.factorize();
  m.lml_init_ = m.lml_;
  return m;
}

GpModel GpModel::fit(const Matrix& x, const Vector& y, const GpFitOptions& options) {
  if (x.rows() < 10) throw ContractViolation("gp_fit: need at least 10 rows");
  if (x.rows() != y.size()) throw ContractViolation("gp: shape mismatch");
  GpModel m;
  m.scaler_ = FeatureScaler::fit(x);
  m.x_ = m.scaler_.apply(x);
  m.y_mean_ = y.mean();
  m.y_ = y.array() - m.y_mean_;
  const Eigen::Index p = x.cols();
  const double y_sd = std::max(std::sqrt(m.y_.squaredNorm() / static_cast<double>(y.size())), 1e-3);
  const Bounds b = theta_bounds(p, y_sd);

  Rng rng(options.seed);
  Vector best;
  double best_f = kNegInf;
  for (int r = 0; r < std::max(options.restarts, 1); ++r) {
    Vector theta(p + 2);
    if (r == 0) {
      theta.head(p).setZero();
      theta[p] = std::log(y_sd);
      theta[p + 1] = std::log(0.1 * y_sd);
      m.lml_init_ = safe_lml(m.x_, m.y_, theta, nullptr);
    } else {
      for (Eigen::Index f = 0; f < p; ++f) theta[f] = -1.5 + 3.5 * uniform01(rng);
      theta[p] = std::log(y_sd) - 1.0 + 2.0 * uniform01(rng);
      theta[p + 1] = std::log(y_sd) - 5.0 + 5.0 * uniform01(rng);
    }
    theta = clamp(theta, b);
    const double f = ascend(m.x_, m.y_, theta, b, options.max_iters);
    if (f > best_f) {
      best_f = f;
      best = theta;
    }
  }
  if (!std::isfinite(best_f)) throw FitError("gp_fit: no hyperparameter setting gave a valid kernel");
  m.theta_ = best;
  m.factorize();
  return m;
}

std::pair<Vector, Vector> GpModel::predict(const Matrix& x) const {
  const Eigen::Index p = x_.cols();
  const Matrix xs = scaler_.apply(x);
  const Matrix ks = se_kernel(xs, x_, theta_);
  const Vector mean = (ks * alpha_).array() + y_mean_;
  const Matrix v = chol_.triangularView<Eigen::Lower>().solve(ks.transpose());
  const double s2 = std::exp(2.0 * theta_[p]);
  const double n2 = std::exp(2.0 * theta_[p + 1]);
  Vector var(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    var[i] = std::max(s2 - v.col(i).squaredNorm(), 0.0) + n2;
  }
  return {mean, var};
}

TTest paired_t_test(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2) {
    throw ContractViolation("paired_t_test: need equal lengths >= 2");
  }
  const auto n = static_cast<double>(a.size());
  double mean = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) mean += (a[i] - b[i]) / n;
  double ss = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) ss += (a[i] - b[i] - mean) * (a[i] - b[i] - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  TTest out;
  if (!(sd > 0.0)) {
    if (mean == 0.0) return {0.0, 1.0, false};
    return {mean > 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity(),
            0.0, true};
  }
  out.t = mean / (sd / std::sqrt(n));
  out.p = std::min(1.0, 2.0 * students_t_cdf(-std::abs(out.t), n - 1.0));
  return out;
}

std::vector<ModelResult> evaluate_models(const MetaDataset& train, const MetaDataset& test,
                                         const GpFitOptions& options) {
  if (test.rows.size() < 2) throw ContractViolation("evaluate_models: test set needs >= 2 rows");
  const Matrix xtr = train.features(), xte = test.features();
  const Vector ytr = train.targets(), yte = test.targets();

  struct Variant {
    std::string name;
    std::vector<int> cols;
  };
  const std::vector<Variant> variants{
      {"GP", {0, 1, 2, 3}},   {"GP-D", {0, 1, 2}},  {"GP-ESS", {1, 2, 3}},
      {"GP-G", {0, 1, 3}},    {"GP-GR", {0, 2, 3}},
  };
  std::vector<ModelResult> results(variants.size() + 2);
  std::vector<std::string> errors(variants.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t v = 0; v < variants.size(); ++v) {
    try {
      const GpModel gp = GpModel::fit(select_columns(xtr, variants[v].cols), ytr, options);
      const auto [mean, var] = gp.predict(select_columns(xte, variants[v].cols));
      results[v] = score(variants[v].name, yte, mean, var);
    } catch (const std::exception& e) {
      errors[v] = e.what();
    }
  }
  for (const auto& e : errors) {
    if (!e.empty()) throw FitError("meta GP fit failed: " + e);
  }

  {
    const FeatureScaler s = FeatureScaler::fit(xtr);
    auto design = [&](const Matrix& x) {
      Matrix d(x.rows(), x.cols() + 1);
      d.col(0).setOnes();
      d.rightCols(x.cols()) = s.apply(x);
      return d;
    };
    const Matrix dtr = design(xtr);
    const Vector beta = dtr.colPivHouseholderQr().solve(ytr);
    const double sigma2 =
        std::max((ytr - dtr * beta).squaredNorm() / static_cast<double>(ytr.size()), 1e-12);
    results[variants.size()] =
        score("linear", yte, design(xte) * beta, Vector::Constant(yte.size(), sigma2));
  }
  {
    const double mu = ytr.mean();
    const double var = std::max((ytr.array() - mu).square().mean(), 1e-12);
    results[variants.size() + 1] =
        score("iid", yte, Vector::Constant(yte.size(), mu), Vector::Constant(yte.size(), var));
  }

  const ModelResult& gp = results[0];
  for (auto& r : results) {
    r.mse_delta = r.mse - gp.mse;
    r.nll_delta = r.nll - gp.nll;
    r.mse_test = paired_t_test(r.sq_errors, gp.sq_errors);
    r.nll_test = paired_t_test(r.nlls, gp.nlls);
  }
  return results;
}

std::string meta_results_csv(const std::vector<ModelResult>& results) {
  std::ostringstream out;
  out.precision(17);
  out << "method,mse,nll,mse_delta,nll_delta,p_mse,p_nll,flagged\n";
  for (const auto& r : results) {
    out << r.method << ',' << r.mse << ',' << r.nll << ',' << r.mse_delta << ',' << r.nll_delta
        << ',' << r.mse_test.p << ',' << r.nll_test.p << ','
        << int(r.mse_test.flagged || r.nll_test.flagged) << '\n';
  }
  return out.str();
}

std::string meta_results_text(const std::vector<ModelResult>& results) {
  std::ostringstream out;
  char buf[200];
  std::snprintf(buf, sizeof buf, "%-8s %12s %10s %12s %10s %10s %10s\n", "method", "MSE", "p",
                "NLL", "dNLL", "p", "dMSE");
  out << buf;
  for (const auto& r : results) {
    std::snprintf(buf, sizeof buf, "%-8s %12s %10s %12s %10s %10s %10s\n", r.method.c_str(),
                  num(r.mse).c_str(), num(r.mse_test.p).c_str(), num(r.nll).c_str(),
                  num(r.nll_delta).c_str(), num(r.nll_test.p).c_str(), num(r.mse_delta).c_str());
    out << buf;
  }
  return out.str();
}

}  // namespace mcbench
