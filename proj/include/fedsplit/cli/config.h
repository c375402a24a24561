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


#ifndef FEDSPLIT_CLI_CONFIG_H_
#define FEDSPLIT_CLI_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fedsplit/federation.h"
#include "fedsplit/intermediary.h"
#include "fedsplit/simulation.h"

namespace fedsplit::cli {

// A config problem tied to one dotted field path, e.g. "privacy.z".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message);
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct DatasetConfig {
  // Synthetic source.
  int n_clients = 6;
  int samples_per_client = 600;
  int dim = 512;
  double heterogeneity = 0.3;
  double signal_norm = 4.0;
  // CSV source: one file per client. Non-empty selects it.
  std::vector<std::filesystem::path> csv;
  std::string label_column = "label";

  double test_fraction = 0.2;
  std::uint64_t seed = 7;
  // Train on the first k clients only; every client's held-out part stays in
  // the pooled test set. Unset: all clients.
  std::optional<int> train_clients;

  bool synthetic() const { return csv.empty(); }
  int total_clients() const {
    return synthetic() ? n_clients : static_cast<int>(csv.size());
  }
  int active_clients() const { return train_clients.value_or(total_clients()); }
};

struct PrivacyConfig {
  double z = 0.5;
  // Unset: DeltaRule over the number of training clients.
  std::optional<double> delta;
  int rounds = 100;
  double subsample_ratio = 1.0;
};

struct MethodConfig {
  ServerOptimizer optimizer = ServerOptimizer::kFedAvg;
  bool adaptive_intermediary = false;
  int fixed_v = 1;
  TargetCount target_count = TargetCount::kClients;
  ClipConfig clip;
  FedAdamConfig fedadam;
};

struct TrainingConfig {
  double eta = 0.05;
  int epochs = 1;
  int batch_size = 32;
};

enum class SweepAxis { kZ, kV, kNClients, kRounds, kSubsample };

std::string_view AxisName(SweepAxis axis);
// Throws ConfigError for unknown names.
SweepAxis ParseAxis(std::string_view name);

struct ExperimentConfig {
  DatasetConfig dataset;
  PrivacyConfig privacy;
  MethodConfig method;
  TrainingConfig training;
  std::vector<std::uint64_t> seeds{1, 2, 3};
  std::filesystem::path out = "out";
  // [sweep] lists values per axis; a run picks one axis.
  std::map<SweepAxis, std::vector<double>> sweep;
};

// Parses TOML text. `source` labels parse errors. Unknown keys are errors.
ExperimentConfig ParseConfig(std::string_view text,
                             std::string_view source = "<config>");
ExperimentConfig LoadConfig(const std::filesystem::path& path);

// Checks every cross-field invariant and operation precondition; throws
// ConfigError naming the first offending field.
void Validate(const ExperimentConfig& cfg);

// Explicit delta, or DeltaRule(active clients).
double ResolveDelta(const ExperimentConfig& cfg);

SimulationConfig ToSimulationConfig(const ExperimentConfig& cfg,
                                    std::uint64_t seed);

// Generates or loads the federation and applies the holdout and
// train_clients selection.
SimulationData BuildData(const ExperimentConfig& cfg);

// Copy of `cfg` with the axis set to `value`.
ExperimentConfig ApplyAxis(const ExperimentConfig& cfg, SweepAxis axis,
                           double value);

}  // namespace fedsplit::cli

#endif  // FEDSPLIT_CLI_CONFIG_H_
