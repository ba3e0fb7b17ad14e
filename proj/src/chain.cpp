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

#include "mcbench/chain.hpp"

#include <bit>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mcbench/error.hpp"

namespace mcbench {

static_assert(std::endian::native == std::endian::little, "binary files are little-endian");

using nlohmann::json;

namespace {

std::filesystem::path with_suffix(const std::filesystem::path& stem, const char* ext) {
  return stem.string() + ext;
}

}  // namespace

void Chain::append(const Vector& x) { data.insert(data.end(), x.data(), x.data() + x.size()); }

Matrix Chain::prefix(std::size_t n) const {
  n = std::min(n, rows());
  Matrix m(static_cast<Eigen::Index>(n), dim);
  for (std::size_t i = 0; i < n; ++i) {
    for (int d = 0; d < dim; ++d) m(static_cast<Eigen::Index>(i), d) = data[i * dim + d];
  }
  return m;
}

std::vector<double> Chain::column(int d, std::size_t n) const {
  n = std::min(n, rows());
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = data[i * dim + d];
  return out;
}

std::vector<double> Chain::walker_column(int d, int walker, std::size_t n) const {
  const std::size_t sweeps = std::min(n, rows()) / static_cast<std::size_t>(walkers);
  std::vector<double> out(sweeps);
  for (std::size_t s = 0; s < sweeps; ++s) {
    out[s] = data[(s * walkers + walker) * dim + d];
  }
  return out;
}

void write_matrix_bin(const std::filesystem::path& path, const double* data, std::size_t count) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(count * sizeof(double)));
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<double> read_matrix_bin(const std::filesystem::path& path, std::size_t count) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::error_code ec;
  const auto size = std::filesystem::file_size(path, ec);
  if (ec || size != count * sizeof(double)) {
    throw IoError(path.string() + ": expected " + std::to_string(count) + " float64 values");
  }
  std::vector<double> data(count);
  in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(size));
  if (!in) throw IoError("read failed: " + path.string());
  return data;
}

void save_chain(const Chain& chain, const std::filesystem::path& stem) {
  json header;
  header["example"] = chain.example;
  header["sampler"] = chain.sampler;
  header["index"] = chain.index;
  header["seed"] = chain.seed;
  header["dim"] = chain.dim;
  header["rows"] = chain.rows();
  header["walkers"] = chain.walkers;
  header["failed"] = chain.failed;
  header["failure"] = chain.failure;
  header["evaluations"] = chain.evaluations;
  header["cpu_seconds"] = chain.cpu_seconds;
  header["final_tuning"] = chain.final_tuning;
  json cps = json::array();
  for (const auto& c : chain.checkpoints) {
    cps.push_back({{"evaluations", c.evaluations}, {"samples", c.samples}, {"cpu_seconds", c.cpu_seconds}});
  }
  header["checkpoints"] = cps;
  const auto& s = chain.stats;
  header["stats"] = {{"transitions", s.transitions}, {"proposals", s.proposals},
                     {"accepted", s.accepted},       {"divergences", s.divergences},
                     {"stalls", s.stalls},           {"accept_stat_sum", s.accept_stat_sum},
                     {"component_usage", s.component_usage}};
  write_matrix_bin(with_suffix(stem, ".bin"), chain.data.data(), chain.data.size());
  std::ofstream out(with_suffix(stem, ".json"), std::ios::trunc);
  if (!out) throw IoError("cannot write chain header " + with_suffix(stem, ".json").string());
  out << header.dump(2) << '\n';
}

Chain load_chain(const std::filesystem::path& stem) {
  std::ifstream in(with_suffix(stem, ".json"));
  if (!in) throw IoError("cannot open chain header " + with_suffix(stem, ".json").string());
  Chain chain;
  try {
    const json h = json::parse(in);
    chain.example = h.at("example");
    chain.sampler = h.at("sampler");
    chain.index = h.at("index");
    chain.seed = h.at("seed");
    chain.dim = h.at("dim");
    chain.walkers = h.at("walkers");
    chain.failed = h.at("failed");
    chain.failure = h.at("failure");
    chain.evaluations = h.at("evaluations");
    chain.cpu_seconds = h.at("cpu_seconds");
    chain.final_tuning = h.at("final_tuning").get<std::vector<double>>();
    for (const auto& c : h.at("checkpoints")) {
      chain.checkpoints.push_back({c.at("evaluations"), c.at("samples"), c.at("cpu_seconds")});
    }
    const auto& s = h.at("stats");
    chain.stats.transitions = s.at("transitions");
    chain.stats.proposals = s.at("proposals");
    chain.stats.accepted = s.at("accepted");
    chain.stats.divergences = s.at("divergences");
    chain.stats.stalls = s.at("stalls");
    chain.stats.accept_stat_sum = s.at("accept_stat_sum");
    chain.stats.component_usage = s.at("component_usage").get<std::vector<std::uint64_t>>();
    const std::size_t rows = h.at("rows");
    chain.data = read_matrix_bin(with_suffix(stem, ".bin"), rows * static_cast<std::size_t>(chain.dim));
  } catch (const json::exception& e) {
    throw IoError("malformed chain header " + with_suffix(stem, ".json").string() + ": " + e.what());
  }
  for (std::size_t j = 1; j < chain.checkpoints.size(); ++j) {
    if (chain.checkpoints[j].samples < chain.checkpoints[j - 1].samples) {
      throw IoError("chain header has decreasing checkpoint sample counts");
    }
  }
  return chain;
}

}  // namespace mcbench
