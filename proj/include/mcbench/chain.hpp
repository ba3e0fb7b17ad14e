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

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mcbench/density.hpp"
#include "mcbench/samplers.hpp"

namespace mcbench {

struct Checkpoint {
  std::uint64_t evaluations = 0;
  std::size_t samples = 0;
  double cpu_seconds = 0.0;
};

/// Samples of one chain stored row-major (rows x dim). Ensemble kernels
/// append `walkers` rows per transition, walker-major within a sweep.
struct Chain {
  std::string example;
  std::string sampler;
  int index = 0;
  std::uint64_t seed = 0;
  int dim = 0;
  int walkers = 1;
  std::vector<double> data;
  std::vector<Checkpoint> checkpoints;
  bool failed = false;
  std::string failure;
  std::uint64_t evaluations = 0;
  double cpu_seconds = 0.0;
  SamplerStats stats;
  std::vector<double> final_tuning;

  std::size_t rows() const { return dim == 0 ? 0 : data.size() / static_cast<std::size_t>(dim); }
  void append(const Vector& x);
  /// First `n` rows as a matrix.
  Matrix prefix(std::size_t n) const;
  /// Column `d` of the first `n` rows.
  std::vector<double> column(int d, std::size_t n) const;
  /// Column `d` of the first `n` rows for one walker (n is rounded down to
  /// whole sweeps).
  std::vector<double> walker_column(int d, int walker, std::size_t n) const;
};

/// Writes `<stem>.bin` (little-endian float64, row-major) and `<stem>.json`.
void save_chain(const Chain& chain, const std::filesystem::path& stem);
Chain load_chain(const std::filesystem::path& stem);

/// Raw float64 matrix files shared by chains and ground-truth sets.
void write_matrix_bin(const std::filesystem::path& path, const double* data, std::size_t count);
std::vector<double> read_matrix_bin(const std::filesystem::path& path, std::size_t count);

}  // namespace mcbench
