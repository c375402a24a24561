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

#ifndef FEDSPLIT_SYNTHDATA_H_
#define FEDSPLIT_SYNTHDATA_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "fedsplit/paramvec.h"

namespace fedsplit {

struct Sample {
  ParamVector features;
  // {0, 1} for classification, any finite value for regression.
  double label = 0.0;
};

struct ClientDataset {
  int client_id = 0;
  std::vector<Sample> samples;

  std::size_t size() const { return samples.size(); }
  std::size_t feature_dim() const {
    return samples.empty() ? 0 : samples.front().features.dim();
  }
};

// Disjoint split of one client's sample indices into `v` shards.
struct IntermediaryPartition {
  int parent_client_id = 0;
  std::vector<std::vector<std::size_t>> shards;

  std::size_t v() const { return shards.size(); }
};

// A participant's view of a dataset: an ordered subset of its samples.
// Does not own the samples; the dataset must outlive the view.
class Shard {
 public:
  Shard(const ClientDataset& data, std::vector<std::size_t> indices);
  // View of the whole dataset in storage order.
  explicit Shard(const ClientDataset& data);

  std::size_t size() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }
  const Sample& operator[](std::size_t i) const {
    return data_->samples[indices_[i]];
  }
  int parent_client_id() const { return data_->client_id; }
  std::size_t feature_dim() const { return data_->feature_dim(); }

 private:
  const ClientDataset* data_;
  std::vector<std::size_t> indices_;
};

struct GenerationOptions {
  // Norm of the shared ground-truth weight vector; controls label noise.
  double signal_norm = 4.0;
};

// Heterogeneous synthetic federation for binary classification. Client i
// draws features x ~ N(m_i, I) with m_i ~ N(0, heterogeneity^2 I), and labels
// y ~ Bernoulli(sigmoid(w* . x)) from one shared w*. Client ids are 0..n-1.
std::vector<ClientDataset> GenerateFederation(
    int n_clients, int samples_per_client, int dim, double heterogeneity,
    std::uint64_t seed, const GenerationOptions& options = {});

// The shared ground-truth weights GenerateFederation uses for `seed`.
ParamVector GroundTruthWeights(int dim, std::uint64_t seed,
                               const GenerationOptions& options = {});

// Random permutation of the sample indices, dealt round-robin into v shards.
// Shard j receives perm[j], perm[j + v], ..., so sizes differ by at most one.
// Throws std::invalid_argument unless 1 <= v <= d.size().
IntermediaryPartition SplitClient(const ClientDataset& d, int v,
                                  std::uint64_t seed);

// Materializes every shard of `partition` as a standalone dataset, samples in
// shard order. Used to express an intermediary federation as a client one.
std::vector<ClientDataset> MaterializeShards(
    const ClientDataset& d, const IntermediaryPartition& partition,
    int first_client_id);

struct HoldoutResult {
  ClientDataset train;
  ClientDataset test;
};

// Random train/test split keeping ceil(test_fraction * n) test samples,
// but always at least one sample in each part.
HoldoutResult HoldoutSplit(const ClientDataset& d, double test_fraction,
                           std::uint64_t seed);

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Loads a numeric CSV with a header row. Features keep the file's column
// order with the label column removed. Errors name the offending row (1-based,
// header is row 1) and column.
ClientDataset LoadCsv(const std::filesystem::path& path,
                      const std::string& label_column, int client_id = 0);

}  // namespace fedsplit

#endif  // FEDSPLIT_SYNTHDATA_H_
