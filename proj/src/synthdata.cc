// Copyright 2026 The FedSplit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fedsplit/synthdata.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace fedsplit {
namespace {

// Stream ids for the generator's independent draws.
constexpr std::uint64_t kGroundTruthStream = 0x67740001;
constexpr std::uint64_t kClientShiftStream = 0x67740002;
constexpr std::uint64_t kClientSampleStream = 0x67740003;
constexpr std::uint64_t kSplitStream = 0x67740004;
constexpr std::uint64_t kHoldoutStream = 0x67740005;

double Sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

std::vector<std::string> SplitLine(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string Trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

Shard::Shard(const ClientDataset& data, std::vector<std::size_t> indices)
    : data_(&data), indices_(std::move(indices)) {
  for (std::size_t i : indices_) {
    if (i >= data.size()) throw std::out_of_range("Shard: index out of range");
  }
}

Shard::Shard(const ClientDataset& data) : data_(&data), indices_(data.size()) {
  std::iota(indices_.begin(), indices_.end(), std::size_t{0});
}

ParamVector GroundTruthWeights(int dim, std::uint64_t seed,
                               const GenerationOptions& options) {
  RngStream rng(seed, kGroundTruthStream, 0);
  ParamVector w = GaussianSample(rng, static_cast<std::size_t>(dim), 1.0);
  w *= options.signal_norm / L2Norm(w);
  return w;
}

std::vector<ClientDataset> GenerateFederation(int n_clients,
                                              int samples_per_client, int dim,
                                              double heterogeneity,
                                              std::uint64_t seed,
                                              const GenerationOptions& options) {
  if (n_clients < 1) throw std::invalid_argument("n_clients must be >= 1");
  if (samples_per_client < 2) {
    throw std::invalid_argument("samples_per_client must be >= 2");
  }
  if (dim < 1) throw std::invalid_argument("dim must be >= 1");
  if (!(heterogeneity >= 0.0 && heterogeneity <= 1.0)) {
    throw std::invalid_argument("heterogeneity must lie in [0, 1]");
  }
  const auto d = static_cast<std::size_t>(dim);
  const ParamVector w = GroundTruthWeights(dim, seed, options);

  std::vector<ClientDataset> clients;
  clients.reserve(static_cast<std::size_t>(n_clients));
  for (int c = 0; c < n_clients; ++c) {
    const auto cid = static_cast<std::uint64_t>(c);
    RngStream shift_rng(seed, kClientShiftStream, cid);
    const ParamVector shift = GaussianSample(shift_rng, d, heterogeneity);
    RngStream rng(seed, kClientSampleStream, cid);
    ClientDataset client;
    client.client_id = c;
    client.samples.reserve(static_cast<std::size_t>(samples_per_client));
    for (int s = 0; s < samples_per_client; ++s) {
      ParamVector x = GaussianSample(rng, d, 1.0);
      x += shift;
      const double p = Sigmoid(Dot(w, x));
      const double y = rng.Bernoulli(p) ? 1.0 : 0.0;
      client.samples.push_back({std::move(x), y});
    }
    clients.push_back(std::move(client));
  }
  return clients;
}

IntermediaryPartition SplitClient(const ClientDataset& d, int v,
                                  std::uint64_t seed) {
  if (v < 1) throw std::invalid_argument("SplitClient: v must be >= 1");
  if (static_cast<std::size_t>(v) > d.size()) {
    throw std::invalid_argument(
        "SplitClient: v exceeds the client's sample count (a shard would be "
        "empty)");
  }
  std::vector<std::size_t> perm(d.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  RngStream rng(seed, kSplitStream, static_cast<std::uint64_t>(d.client_id));
  rng.Shuffle(perm);

  IntermediaryPartition out;
  out.parent_client_id = d.client_id;
  out.shards.resize(static_cast<std::size_t>(v));
  for (std::size_t i = 0; i < perm.size(); ++i) {
    out.shards[i % out.shards.size()].push_back(perm[i]);
  }
  return out;
}

std::vector<ClientDataset> MaterializeShards(
    const ClientDataset& d, const IntermediaryPartition& partition,
    int first_client_id) {
  std::vector<ClientDataset> out;
  int id = first_client_id;
  for (const auto& shard : partition.shards) {
    ClientDataset sub;
    sub.client_id = id++;
    for (std::size_t i : shard) sub.samples.push_back(d.samples.at(i));
    out.push_back(std::move(sub));
  }
  return out;
}

HoldoutResult HoldoutSplit(const ClientDataset& d, double test_fraction,
                           std::uint64_t seed) {
  if (d.size() < 2) {
    throw std::invalid_argument("HoldoutSplit: need at least two samples");
  }
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw std::invalid_argument("HoldoutSplit: test_fraction must be in (0,1)");
  }
  std::vector<std::size_t> perm(d.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  RngStream rng(seed, kHoldoutStream, static_cast<std::uint64_t>(d.client_id));
  rng.Shuffle(perm);

  auto n_test = static_cast<std::size_t>(
      std::ceil(test_fraction * static_cast<double>(d.size())));
  n_test = std::clamp<std::size_t>(n_test, 1, d.size() - 1);
  std::sort(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_test));
  std::sort(perm.begin() + static_cast<std::ptrdiff_t>(n_test), perm.end());

  HoldoutResult out;
  out.test.client_id = d.client_id;
  out.train.client_id = d.client_id;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    auto& dst = i < n_test ? out.test : out.train;
    dst.samples.push_back(d.samples[perm[i]]);
  }
  return out;
}

ClientDataset LoadCsv(const std::filesystem::path& path,
                      const std::string& label_column, int client_id) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());

  std::string line;
  if (!std::getline(in, line) || Trim(line).empty()) {
    throw ParseError(path.string() + ": empty file (no header row)");
  }
  std::vector<std::string> header = SplitLine(line);
  for (auto& h : header) h = Trim(h);
  const auto label_it = std::find(header.begin(), header.end(), label_column);
  if (label_it == header.end()) {
    throw ParseError(path.string() + ": label column '" + label_column +
                     "' not found in header");
  }
  const auto label_idx =
      static_cast<std::size_t>(std::distance(header.begin(), label_it));
  if (header.size() < 2) {
    throw ParseError(path.string() + ": need at least one feature column");
  }

  ClientDataset out;
  out.client_id = client_id;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (Trim(line).empty()) continue;
    const std::vector<std::string> cells = SplitLine(line);
    if (cells.size() != header.size()) {
      throw ParseError(path.string() + ": row " + std::to_string(row) +
                       " has " + std::to_string(cells.size()) +
                       " cells, header has " + std::to_string(header.size()));
    }
    std::vector<double> features;
    features.reserve(header.size() - 1);
    double label = 0.0;
    for (std::size_t col = 0; col < cells.size(); ++col) {
      const std::string cell = Trim(cells[col]);
      double value = 0.0;
      const auto [ptr, ec] =
          std::from_chars(cell.data(), cell.data() + cell.size(), value);
      if (cell.empty() || ec != std::errc() ||
          ptr != cell.data() + cell.size() || !std::isfinite(value)) {
        throw ParseError(path.string() + ": row " + std::to_string(row) +
                         ", column '" + header[col] + "': " +
                         (cell.empty() ? "missing value"
                                       : "non-numeric value '" + cell + "'"));
      }
      if (col == label_idx) {
        label = value;
      } else {
        features.push_back(value);
      }
    }
    out.samples.push_back({ParamVector(std::move(features)), label});
  }
  if (out.samples.empty()) {
    throw ParseError(path.string() + ": no data rows");
  }
  return out;
}

}  // namespace fedsplit
