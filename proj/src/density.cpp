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

#include "mcbench/density.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "mcbench/error.hpp"

namespace mcbench {
namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;

double log_sum_exp(const Vector& v) {
  const double m = v.maxCoeff();
  if (!std::isfinite(m)) return m;
  return m + std::log((v.array() - m).exp().sum());
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

}  // namespace

Matrix cholesky_with_jitter(const Matrix& cov) {
  if (cov.rows() != cov.cols() || cov.rows() == 0) {
    throw ContractViolation("covariance must be square and nonempty");
  }
  if (!cov.allFinite()) throw NotPositiveDefinite("covariance has non-finite entries");
  Eigen::LLT<Matrix> llt(cov);
  if (llt.info() == Eigen::Success && llt.matrixL().toDenseMatrix().diagonal().minCoeff() > 0.0) {
    return llt.matrixL();
  }
  const double mean_diag = cov.diagonal().mean();
  if (!(mean_diag > 0.0)) {
    throw NotPositiveDefinite("covariance has non-positive mean diagonal");
  }
  for (double rel = 1e-9; rel <= 1e-3 * (1.0 + 1e-9); rel *= 10.0) {
    Matrix jittered = cov;
    jittered.diagonal().array() += rel * mean_diag;
    llt.compute(jittered);
    if (llt.info() == Eigen::Success) {
      Matrix l = llt.matrixL();
      if (l.diagonal().minCoeff() > 0.0) return l;
    }
  }
  throw NotPositiveDefinite("covariance not positive definite after jitter up to 1e-3");
}

MixtureOfGaussians::MixtureOfGaussians(Vector weights, std::vector<Vector> means,
                                       std::vector<Matrix> chol_factors)
    : weights_(std::move(weights)), means_(std::move(means)), chol_(std::move(chol_factors)) {
  const auto c = weights_.size();
  if (c == 0) throw ContractViolation("mixture needs at least one component");
  if (means_.size() != static_cast<std::size_t>(c) || chol_.size() != static_cast<std::size_t>(c)) {
    throw ContractViolation("mixture: weights, means and factors disagree in count");
  }
  dim_ = static_cast<int>(means_[0].size());
  if (dim_ == 0) throw ContractViolation("mixture: zero dimension");
  if (!weights_.allFinite() || weights_.minCoeff() <= 0.0) {
    throw ContractViolation("mixture: weights must be strictly positive");
  }
  if (std::abs(weights_.sum() - 1.0) > 1e-12) {
    throw ContractViolation("mixture: weights must sum to 1");
  }
  log_weights_ = weights_.array().log();
  log_norm_.resize(c);
  for (Eigen::Index k = 0; k < c; ++k) {
    const auto& m = means_[k];
    const auto& l = chol_[k];
    if (m.size() != dim_ || l.rows() != dim_ || l.cols() != dim_) {
      throw ContractViolation("mixture: component shape mismatch");
    }
    if (!m.allFinite() || !l.allFinite()) {
      throw ContractViolation("mixture: non-finite parameters");
    }
    if (!l.isLowerTriangular(0.0)) {
      throw ContractViolation("mixture: Cholesky factor is not lower triangular");
    }
    if (l.diagonal().minCoeff() <= 0.0) {
      throw ContractViolation("mixture: covariance is not positive definite");
    }
    log_norm_[k] = -0.5 * dim_ * kLog2Pi - l.diagonal().array().log().sum();
  }
}

MixtureOfGaussians MixtureOfGaussians::from_covariances(Vector weights, std::vector<Vector> means,
                                                        const std::vector<Matrix>& covs) {
  std::vector<Matrix> chol;
  chol.reserve(covs.size());
  for (const auto& s : covs) chol.push_back(cholesky_with_jitter(s));
  return MixtureOfGaussians(std::move(weights), std::move(means), std::move(chol));
}

Matrix MixtureOfGaussians::covariance(int c) const { return chol_[c] * chol_[c].transpose(); }

void MixtureOfGaussians::component_log_densities(const Vector& z, Eigen::Ref<Vector> out) const {
  for (int k = 0; k < components(); ++k) {
    const Vector y = chol_[k].triangularView<Eigen::Lower>().solve(z - means_[k]);
    out[k] = log_weights_[k] + log_norm_[k] - 0.5 * y.squaredNorm();
  }
}

void MixtureOfGaussians::component_log_densities_block(const Matrix& rows, Matrix& out) const {
  out.resize(rows.rows(), components());
  for (int k = 0; k < components(); ++k) {
    Matrix y = (rows.rowwise() - means_[k].transpose()).transpose();
    chol_[k].triangularView<Eigen::Lower>().solveInPlace(y);
    out.col(k) = (log_weights_[k] + log_norm_[k] - 0.5 * y.colwise().squaredNorm().array()).transpose();
  }
}

double MixtureOfGaussians::log_density(const Vector& z) const { return log_density(z, nullptr); }

double MixtureOfGaussians::log_density(const Vector& z, Vector* grad) const {
  const int c = components();
  Vector terms(c);
  if (grad == nullptr) {
    component_log_densities(z, terms);
    return log_sum_exp(terms);
  }
  std::vector<Vector> solved(c);
  for (int k = 0; k < c; ++k) {
    solved[k] = chol_[k].triangularView<Eigen::Lower>().solve(z - means_[k]);
    terms[k] = log_weights_[k] + log_norm_[k] - 0.5 * solved[k].squaredNorm();
  }
  const double lse = log_sum_exp(terms);
  grad->setZero(dim_);
  for (int k = 0; k < c; ++k) {
    const double r = std::exp(terms[k] - lse);
    if (r == 0.0) continue;
    // -S^{-1}(z - m) = -L^{-T} y
    *grad -= r * chol_[k].transpose().triangularView<Eigen::Upper>().solve(solved[k]);
  }
  return lse;
}

Vector MixtureOfGaussians::mean() const {
  Vector m = Vector::Zero(dim_);
  for (int k = 0; k < components(); ++k) m += weights_[k] * means_[k];
  return m;
}

Vector MixtureOfGaussians::variance() const {
  Vector second = Vector::Zero(dim_);
  for (int k = 0; k < components(); ++k) {
    const Vector diag = chol_[k].rowwise().squaredNorm();
    second += weights_[k] * (diag.array() + means_[k].array().square()).matrix();
  }
  const Vector m = mean();
  return second.array() - m.array().square();
}

double MixtureOfGaussians::marginal_cdf(int d, double a) const {
  if (d < 0 || d >= dim_) throw ContractViolation("marginal_cdf: dimension index out of range");
  if (std::isnan(a)) throw ContractViolation("marginal_cdf: NaN argument");
  double p = 0.0;
  for (int k = 0; k < components(); ++k) {
    const double sd = chol_[k].row(d).norm();
    p += weights_[k] * normal_cdf((a - means_[k][d]) / sd);
  }
  return std::clamp(p, 0.0, 1.0);
}

Vector MixtureOfGaussians::sample(Rng& rng, int* component) const {
  const double u = uniform01(rng);
  int k = 0;
  double acc = weights_[0];
  while (k + 1 < components() && u >= acc) acc += weights_[++k];
  Vector n(dim_);
  for (int i = 0; i < dim_; ++i) n[i] = standard_normal(rng);
  if (component != nullptr) *component = k;
  return means_[k] + chol_[k].triangularView<Eigen::Lower>() * n;
}

void mixture_log_density_rows(const MixtureOfGaussians& mog, const Matrix& data,
                              Eigen::Ref<Vector> out, Exec exec) {
  const Eigen::Index n = data.rows();
  if (data.cols() != mog.dim()) throw ContractViolation("mixture_log_density_rows: dimension mismatch");
  if (out.size() != n) throw ContractViolation("mixture_log_density_rows: output size mismatch");
  // Fixed row blocks so both paths run identical arithmetic per row.
  constexpr Eigen::Index kBlock = 256;
  const Eigen::Index blocks = (n + kBlock - 1) / kBlock;
  auto body = [&](Eigen::Index b) {
    const Eigen::Index begin = b * kBlock;
    const Eigen::Index len = std::min(kBlock, n - begin);
    Matrix lc;
    mog.component_log_densities_block(data.middleRows(begin, len), lc);
    for (Eigen::Index i = 0; i < len; ++i) {
      const double m = lc.row(i).maxCoeff();
      out[begin + i] = std::isfinite(m) ? m + std::log((lc.row(i).array() - m).exp().sum()) : m;
    }
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (Eigen::Index b = 0; b < blocks; ++b) body(b);
  } else {
    for (Eigen::Index b = 0; b < blocks; ++b) body(b);
  }
}

AffineTransform AffineTransform::identity(int dim) {
  return {Vector::Ones(dim), Vector::Zero(dim)};
}

void AffineTransform::validate() const {
  if (scale.size() != shift.size()) throw ContractViolation("affine: scale/shift size mismatch");
  if (!scale.allFinite() || !shift.allFinite()) throw ContractViolation("affine: non-finite entries");
  if (scale.size() > 0 && scale.minCoeff() <= 0.0) {
    throw ContractViolation("affine: scale entries must be strictly positive");
  }
}

Vector AffineTransform::apply(const Vector& z) const {
  return (scale.array() * z.array() + shift.array()).matrix();
}

Vector AffineTransform::invert(const Vector& x) const {
  return ((x.array() - shift.array()) / scale.array()).matrix();
}

double AffineTransform::log_abs_det() const { return scale.array().log().sum(); }

BenchmarkDensity::BenchmarkDensity(std::string name, MixtureOfGaussians core,
                                   AffineTransform destandardize)
    : name_(std::move(name)), core_(std::move(core)), transform_(std::move(destandardize)) {
  transform_.validate();
  if (transform_.dim() != core_.dim()) {
    throw ContractViolation("density: transform dimension does not match mixture");
  }
  moments_.mean = transform_.apply(core_.mean());
  moments_.var = (transform_.scale.array().square() * core_.variance().array()).matrix();
}

double BenchmarkDensity::log_density(const Vector& x) const {
  return core_.log_density(transform_.invert(x)) - transform_.log_abs_det();
}

Vector BenchmarkDensity::grad_log_density(const Vector& x) const {
  Vector g;
  core_.log_density(transform_.invert(x), &g);
  return (g.array() / transform_.scale.array()).matrix();
}

Matrix BenchmarkDensity::sample_exact(std::size_t n, Rng& rng) const {
  if (n == 0) throw ContractViolation("sample_exact: n must be >= 1");
  Matrix out(static_cast<Eigen::Index>(n), dim());
  for (std::size_t i = 0; i < n; ++i) {
    out.row(static_cast<Eigen::Index>(i)) = transform_.apply(core_.sample(rng)).transpose();
  }
  return out;
}

double BenchmarkDensity::marginal_cdf(int d, double a) const {
  if (d < 0 || d >= dim()) throw ContractViolation("marginal_cdf: dimension index out of range");
  return core_.marginal_cdf(d, (a - transform_.shift[d]) / transform_.scale[d]);
}

BlackBoxView::BlackBoxView(std::shared_ptr<const BenchmarkDensity> density, double log_offset)
    : density_(std::move(density)), log_offset_(log_offset) {
  if (!density_) throw ContractViolation("BlackBoxView: null density");
  dim_ = density_->dim();
}

void BlackBoxView::check_input(const Vector& x) const {
  if (x.size() != dim_) {
    std::ostringstream msg;
    msg << "black box: expected dimension " << dim_ << ", got " << x.size();
    throw ContractViolation(msg.str());
  }
  if (!x.allFinite()) throw ContractViolation("black box: non-finite input");
}

void BlackBoxView::charge() {
  if (evaluations_.load() >= limit_) throw BudgetExhausted();
  evaluations_.fetch_add(1);
}

double BlackBoxView::log_density(const Vector& x) {
  check_input(x);
  charge();
  return density_->log_density(x) + log_offset_;
}

Vector BlackBoxView::gradient(const Vector& x) {
  check_input(x);
  charge();
  return density_->grad_log_density(x);
}

}  // namespace mcbench
