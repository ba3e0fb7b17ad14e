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
#include <filesystem>
#include <numbers>

#include "mcbench/density.hpp"
#include "mcbench/error.hpp"

namespace mcbench {
namespace {

// Parameters of the generated targets must not depend on the standard
// library's distribution implementations, so draw them from the raw engine.
class ParamStream {
 public:
  explicit ParamStream(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double normal() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }
  Matrix normal_matrix(int rows, int cols) {
    Matrix m(rows, cols);
    for (int j = 0; j < cols; ++j)
      for (int i = 0; i < rows; ++i) m(i, j) = normal();
    return m;
  }

 private:
  std::mt19937_64 engine_;
};

Matrix random_rotation(ParamStream& ps, int dim) {
  Eigen::HouseholderQR<Matrix> qr(ps.normal_matrix(dim, dim));
  Matrix q = qr.householderQ();
  return q;
}

BenchmarkDensity gaussian(const std::string& name, const Vector& mean, const Matrix& cov,
                          AffineTransform t) {
  return BenchmarkDensity(name,
                          MixtureOfGaussians::from_covariances(Vector::Ones(1), {mean}, {cov}),
                          std::move(t));
}

BenchmarkDensity random_mog(const std::string& name, int dim, int comps, double spread,
                            std::uint64_t seed) {
  ParamStream ps(seed);
  Vector w(comps);
  for (int k = 0; k < comps; ++k) w[k] = 0.5 + ps.uniform();
  w /= w.sum();
  std::vector<Vector> means;
  std::vector<Matrix> covs;
  for (int k = 0; k < comps; ++k) {
    Vector m(dim);
    for (int i = 0; i < dim; ++i) m[i] = spread * ps.normal();
    means.push_back(m);
    const Matrix a = ps.normal_matrix(dim, dim);
    covs.push_back(0.6 * a * a.transpose() / dim + 0.3 * Matrix::Identity(dim, dim));
  }
  AffineTransform t;
  t.scale.resize(dim);
  t.shift.resize(dim);
  for (int i = 0; i < dim; ++i) {
    t.scale[i] = std::exp(1.5 * (2.0 * ps.uniform() - 1.0));
    t.shift[i] = 3.0 * ps.normal();
  }
  return BenchmarkDensity(name, MixtureOfGaussians::from_covariances(w, means, covs), t);
}

}  // namespace

std::vector<std::string> bundled_density_names() {
  return {"gauss-1d", "mog2-1d",     "corr-2d",  "mog2-2d",
          "gauss-10d", "illcond-10d", "mog8-10d", "mog3-20d"};
}

BenchmarkDensity bundled_density(const std::string& name) {
  if (name == "gauss-1d") {
    return gaussian(name, Vector::Zero(1), Matrix::Identity(1, 1), AffineTransform::identity(1));
  }
  if (name == "mog2-1d") {
    Vector w(2);
    w << 0.3, 0.7;
    std::vector<Vector> means{Vector::Constant(1, -1.0), Vector::Constant(1, 0.8)};
    std::vector<Matrix> covs{Matrix::Constant(1, 1, 0.25), Matrix::Constant(1, 1, 0.64)};
    AffineTransform t{Vector::Constant(1, 2.0), Vector::Constant(1, 1.0)};
    return BenchmarkDensity(name, MixtureOfGaussians::from_covariances(w, means, covs), t);
  }
  if (name == "corr-2d") {
    Matrix cov(2, 2);
    cov << 1.0, 0.9, 0.9, 1.0;
    Vector scale(2), shift(2);
    scale << 3.0, 0.5;
    shift << -2.0, 4.0;
    return gaussian(name, Vector::Zero(2), cov, {scale, shift});
  }
  if (name == "mog2-2d") {
    Vector w(2);
    w << 0.6, 0.4;
    Vector m1(2), m2(2);
    m1 << -1.0, -0.5;
    m2 << 1.2, 0.8;
    Matrix s1(2, 2), s2(2, 2);
    s1 << 0.5, 0.2, 0.2, 0.4;
    s2 << 0.6, -0.25, -0.25, 0.5;
    Vector scale(2), shift(2);
    scale << 2.0, 0.5;
    shift << 1.0, -3.0;
    return BenchmarkDensity(name, MixtureOfGaussians::from_covariances(w, {m1, m2}, {s1, s2}),
                            {scale, shift});
  }
  if (name == "gauss-10d") {
    return gaussian(name, Vector::Zero(10), Matrix::Identity(10, 10), AffineTransform::identity(10));
  }
  if (name == "illcond-10d") {
    // Covariance eigenvalues log-spaced over four decades, randomly rotated.
    ParamStream ps(0x1cc0d10dULL);
    const Matrix q = random_rotation(ps, 10);
    Vector lambda(10);
    for (int i = 0; i < 10; ++i) lambda[i] = std::pow(10.0, -2.0 + 4.0 * i / 9.0);
    const Matrix cov = q * lambda.asDiagonal() * q.transpose();
    return gaussian(name, Vector::Zero(10), 0.5 * (cov + cov.transpose()),
                    AffineTransform::identity(10));
  }
  if (name == "mog8-10d") return random_mog(name, 10, 8, 0.8, 0x8c0e10dULL);
  if (name == "mog3-20d") return random_mog(name, 20, 3, 0.8, 0x3c020dULL);
  throw ContractViolation("unknown bundled density '" + name + "'");
}

BenchmarkDensity resolve_density(const std::string& name_or_path) {
  for (const auto& n : bundled_density_names()) {
    if (n == name_or_path) return bundled_density(n);
  }
  if (!std::filesystem::exists(name_or_path)) {
    throw IoError("'" + name_or_path + "' is neither a bundled density nor a readable file");
  }
  return load_density(name_or_path);
}

}  // namespace mcbench
