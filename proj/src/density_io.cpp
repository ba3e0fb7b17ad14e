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

#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mcbench/density.hpp"
#include "mcbench/error.hpp"

namespace mcbench {
namespace {

// 17 significant digits, always; enough for a bit-exact double round trip.
void put_number(std::ostream& os, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  os << buf;
}

void put_vector(std::ostream& os, const Vector& v) {
  os << '[';
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) os << ", ";
    put_number(os, v[i]);
  }
  os << ']';
}

void put_matrix(std::ostream& os, const Matrix& m, const char* indent) {
  os << '[';
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    os << (r ? ",\n" : "\n") << indent;
    put_vector(os, m.row(r).transpose());
  }
  os << ']';
}

Vector to_vector(const nlohmann::json& j, const char* field) {
  if (!j.is_array()) throw IoError(std::string("density file: '") + field + "' must be an array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw IoError(std::string("density file: non-numeric entry in '") + field + "'");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

Matrix to_matrix(const nlohmann::json& j, const char* field, int dim) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim) {
    throw IoError(std::string("density file: '") + field + "' must be a dim x dim array");
  }
  Matrix m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    const Vector row = to_vector(j[r], field);
    if (row.size() != dim) throw IoError(std::string("density file: ragged '") + field + "'");
    m.row(r) = row.transpose();
  }
  return m;
}

}  // namespace

std::string density_to_text(const BenchmarkDensity& density) {
  const auto& mog = density.core();
  std::ostringstream os;
  os << "{\n  \"name\": " << nlohmann::json(density.name()).dump() << ",\n";
  os << "  \"dim\": " << density.dim() << ",\n";
  os << "  \"weights\": ";
  put_vector(os, mog.weights());
  os << ",\n  \"means\": [";
  for (int k = 0; k < mog.components(); ++k) {
    os << (k ? ",\n    " : "\n    ");
    put_vector(os, mog.means()[k]);
  }
  os << "],\n  \"chol_factors\": [";
  for (int k = 0; k < mog.components(); ++k) {
    os << (k ? ",\n    " : "\n    ");
    put_matrix(os, mog.chol_factors()[k], "      ");
  }
  os << "],\n  \"scale\": ";
  put_vector(os, density.destandardize().scale);
  os << ",\n  \"shift\": ";
  put_vector(os, density.destandardize().shift);
  os << "\n}\n";
  return os.str();
}

BenchmarkDensity density_from_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw IoError(std::string("density file: parse failure: ") + e.what());
  }
  for (const char* field : {"name", "dim", "weights", "means", "chol_factors", "scale", "shift"}) {
    if (!j.contains(field)) throw IoError(std::string("density file: missing field '") + field + "'");
  }
  if (!j["dim"].is_number_integer() || j["dim"].get<int>() < 1) {
    throw IoError("density file: 'dim' must be a positive integer");
  }
  const int dim = j["dim"].get<int>();
  Vector weights = to_vector(j["weights"], "weights");
  const auto c = static_cast<std::size_t>(weights.size());
  if (!j["means"].is_array() || j["means"].size() != c || !j["chol_factors"].is_array() ||
      j["chol_factors"].size() != c) {
    throw IoError("density file: 'means' and 'chol_factors' must have one entry per weight");
  }
  std::vector<Vector> means;
  std::vector<Matrix> chol;
  for (std::size_t k = 0; k < c; ++k) {
    means.push_back(to_vector(j["means"][k], "means"));
    if (means.back().size() != dim) throw IoError("density file: mean has wrong dimension");
    chol.push_back(to_matrix(j["chol_factors"][k], "chol_factors", dim));
  }
  AffineTransform t{to_vector(j["scale"], "scale"), to_vector(j["shift"], "shift")};
  if (t.dim() != dim || t.shift.size() != dim) throw IoError("density file: scale/shift have wrong dimension");
  try {
    return BenchmarkDensity(j["name"].get<std::string>(),
                            MixtureOfGaussians(std::move(weights), std::move(means), std::move(chol)),
                            std::move(t));
  } catch (const ContractViolation& e) {
    throw IoError(std::string("density file rejected: ") + e.what());
  }
}

void save_density(const BenchmarkDensity& density, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << density_to_text(density);
  if (!out) throw IoError("write failed: " + path.string());
}

BenchmarkDensity load_density(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open density file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return density_from_text(buf.str());
}

}  // namespace mcbench
