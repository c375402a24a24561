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


#include "fedsplit/cli/config.h"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <utility>

#include <fmt/format.h>
#include <toml.hpp>

#include "fedsplit/accountant.h"
#include "fedsplit/synthdata.h"

namespace fedsplit::cli {
namespace {

// Typed access to one TOML table that remembers which keys were read, so
// leftovers can be reported as unknown fields.
class TableReader {
 public:
  TableReader(const toml::table* table, std::string prefix)
      : table_(table), prefix_(std::move(prefix)) {}

  bool Has(std::string_view key) const {
    return table_ != nullptr && table_->contains(key);
  }

  bool IsString(std::string_view key) const {
    return Has(key) && table_->get(key)->is_string();
  }

  std::string Field(std::string_view key) const {
    return prefix_.empty() ? std::string(key) : prefix_ + "." + std::string(key);
  }

  std::optional<double> Number(std::string_view key) {
    const toml::node* n = Get(key);
    if (n == nullptr) return std::nullopt;
    if (auto v = n->value_exact<double>()) return *v;
    if (auto v = n->value_exact<std::int64_t>()) return static_cast<double>(*v);
    throw ConfigError(Field(key), "expected a number");
  }

  std::optional<std::int64_t> Integer(std::string_view key) {
    const toml::node* n = Get(key);
    if (n == nullptr) return std::nullopt;
    if (auto v = n->value_exact<std::int64_t>()) return *v;
    throw ConfigError(Field(key), "expected an integer");
  }

  std::optional<int> Int(std::string_view key) {
    auto v = Integer(key);
    if (!v) return std::nullopt;
    if (*v < std::numeric_limits<int>::min() ||
        *v > std::numeric_limits<int>::max()) {
      throw ConfigError(Field(key), "integer out of range");
    }
    return static_cast<int>(*v);
  }

  std::optional<bool> Bool(std::string_view key) {
    const toml::node* n = Get(key);
    if (n == nullptr) return std::nullopt;
    if (auto v = n->value_exact<bool>()) return *v;
    throw ConfigError(Field(key), "expected true or false");
  }

  std::optional<std::string> String(std::string_view key) {
    const toml::node* n = Get(key);
    if (n == nullptr) return std::nullopt;
    if (auto v = n->value_exact<std::string>()) return *v;
    throw ConfigError(Field(key), "expected a string");
  }

  std::optional<std::vector<double>> NumberArray(std::string_view key) {
    const toml::node* n = Get(key);
    if (n == nullptr) return std::nullopt;
    const toml::array* arr = n->as_array();
    if (arr == nullptr) throw ConfigError(Field(key), "expected an array");
    std::vector<double> out;
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const toml::node& e = *arr->get(i);
      if (auto v = e.value_exact<double>()) {
        out.push_back(*v);
      } else if (auto w = e.value_exact<std::int64_t>()) {
        out.push_back(static_cast<double>(*w));
      } else {
        throw ConfigError(fmt::format("{}[{}]", Field(key), i),
                          "expected a number");
      }
    }
    return out;
  }

  std::optional<std::vector<std::string>> StringArray(std::string_view key) {
    const toml::node* n = Get(key);
    if (n == nullptr) return std::nullopt;
    const toml::array* arr = n->as_array();
    if (arr == nullptr) throw ConfigError(Field(key), "expected an array");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < arr->size(); ++i) {
      auto v = arr->get(i)->value_exact<std::string>();
      if (!v) {
        throw ConfigError(fmt::format("{}[{}]", Field(key), i),
                          "expected a string");
      }
      out.push_back(*v);
    }
    return out;
  }

  TableReader Sub(std::string_view key) {
    const toml::node* n = Get(key);
    if (n == nullptr) return TableReader(nullptr, Field(key));
    const toml::table* t = n->as_table();
    if (t == nullptr) throw ConfigError(Field(key), "expected a table");
    return TableReader(t, Field(key));
  }

  void RejectUnknown() const {
    if (table_ == nullptr) return;
    for (const auto& [key, node] : *table_) {
      if (!seen_.contains(std::string(key.str()))) {
        throw ConfigError(Field(key.str()), "unknown key");
      }
    }
  }

 private:
  const toml::node* Get(std::string_view key) {
    if (table_ == nullptr) return nullptr;
    seen_.insert(std::string(key));
    return table_->get(key);
  }

  const toml::table* table_;
  std::string prefix_;
  std::set<std::string> seen_;
};

template <typename T>
void Assign(std::optional<T> v, T& dst) {
  if (v) dst = *v;
}

std::uint64_t ToSeed(std::int64_t v, const std::string& field) {
  if (v < 0) throw ConfigError(field, "seeds must be non-negative");
  return static_cast<std::uint64_t>(v);
}

void ReadDataset(TableReader r, DatasetConfig& d) {
  const bool has_synthetic = r.Has("n_clients") ||
                             r.Has("samples_per_client") || r.Has("dim") ||
                             r.Has("heterogeneity") || r.Has("signal_norm");
  Assign(r.Int("n_clients"), d.n_clients);
  Assign(r.Int("samples_per_client"), d.samples_per_client);
  Assign(r.Int("dim"), d.dim);
  Assign(r.Number("heterogeneity"), d.heterogeneity);
  Assign(r.Number("signal_norm"), d.signal_norm);
  if (auto csv = r.StringArray("csv")) {
    if (has_synthetic) {
      throw ConfigError(r.Field("csv"),
                        "give either csv files or synthetic generation keys, "
                        "not both");
    }
    if (csv->empty()) throw ConfigError(r.Field("csv"), "must not be empty");
    d.csv.assign(csv->begin(), csv->end());
  }
  Assign(r.String("label_column"), d.label_column);
  Assign(r.Number("test_fraction"), d.test_fraction);
  if (auto s = r.Integer("seed")) d.seed = ToSeed(*s, r.Field("seed"));
  if (auto k = r.Int("train_clients")) d.train_clients = *k;
  r.RejectUnknown();
}

void ReadPrivacy(TableReader r, PrivacyConfig& p) {
  Assign(r.Number("z"), p.z);
  if (r.Has("delta")) {
    // "rule" or a number.
    if (r.IsString("delta")) {
      if (*r.String("delta") != "rule") {
        throw ConfigError(r.Field("delta"),
                          "expected a number or the string \"rule\"");
      }
      p.delta.reset();
    } else {
      p.delta = r.Number("delta");
    }
  }
  Assign(r.Int("rounds"), p.rounds);
  Assign(r.Number("subsample_ratio"), p.subsample_ratio);
  r.RejectUnknown();
}

void ReadMethod(TableReader r, MethodConfig& m) {
  if (auto name = r.String("optimizer")) {
    try {
      m.optimizer = ParseOptimizer(*name);
    } catch (const std::invalid_argument&) {
      throw ConfigError(r.Field("optimizer"),
                        fmt::format("unknown optimizer \"{}\" (expected "
                                    "fedavg, fedadam or fednova)",
                                    *name));
    }
  }
  Assign(r.Bool("adaptive_intermediary"), m.adaptive_intermediary);
  Assign(r.Int("fixed_v"), m.fixed_v);
  if (auto t = r.String("target_n")) {
    if (*t == "clients") {
      m.target_count = TargetCount::kClients;
    } else if (*t == "participants") {
      m.target_count = TargetCount::kParticipants;
    } else {
      throw ConfigError(r.Field("target_n"),
                        "expected \"clients\" or \"participants\"");
    }
  }
  {
    TableReader c = r.Sub("clip");
    Assign(c.Bool("adaptive"), m.clip.adaptive);
    if (auto v = c.Number("initial")) m.clip.initial_C = *v;
    Assign(c.Number("eta_c"), m.clip.eta_c);
    Assign(c.Number("gamma"), m.clip.gamma);
    Assign(c.Number("sigma_b"), m.clip.sigma_b);
    c.RejectUnknown();
  }
  {
    TableReader a = r.Sub("fedadam");
    Assign(a.Number("server_lr"), m.fedadam.server_lr);
    Assign(a.Number("beta1"), m.fedadam.beta1);
    Assign(a.Number("beta2"), m.fedadam.beta2);
    Assign(a.Number("tau"), m.fedadam.tau);
    a.RejectUnknown();
  }
  r.RejectUnknown();
}

void ReadTraining(TableReader r, TrainingConfig& t) {
  Assign(r.Number("eta"), t.eta);
  Assign(r.Int("epochs"), t.epochs);
  Assign(r.Int("batch_size"), t.batch_size);
  r.RejectUnknown();
}

void ReadRun(TableReader r, ExperimentConfig& cfg) {
  if (auto seeds = r.NumberArray("seeds")) {
    cfg.seeds.clear();
    for (std::size_t i = 0; i < seeds->size(); ++i) {
      const double s = (*seeds)[i];
      const std::string field = fmt::format("{}[{}]", r.Field("seeds"), i);
      if (s != std::floor(s)) throw ConfigError(field, "expected an integer");
      cfg.seeds.push_back(ToSeed(static_cast<std::int64_t>(s), field));
    }
  }
  if (auto out = r.String("out")) cfg.out = *out;
  r.RejectUnknown();
}

void ReadSweep(TableReader r, ExperimentConfig& cfg) {
  for (SweepAxis axis : {SweepAxis::kZ, SweepAxis::kV, SweepAxis::kNClients,
                         SweepAxis::kRounds, SweepAxis::kSubsample}) {
    if (auto values = r.NumberArray(AxisName(axis))) {
      if (values->empty()) {
        throw ConfigError(r.Field(AxisName(axis)), "must not be empty");
      }
      cfg.sweep[axis] = *values;
    }
  }
  r.RejectUnknown();
}

void Require(bool ok, const std::string& field, const std::string& message) {
  if (!ok) throw ConfigError(field, message);
}

bool IsIntegral(double x) { return std::isfinite(x) && x == std::floor(x); }

void ValidateAxisValue(const ExperimentConfig& cfg, SweepAxis axis, double x,
                       const std::string& field) {
  switch (axis) {
    case SweepAxis::kZ:
      Require(std::isfinite(x) && x >= 0.0, field, "z must be >= 0");
      break;
    case SweepAxis::kV:
      Require(IsIntegral(x) && x >= 1.0, field, "v must be an integer >= 1");
      break;
    case SweepAxis::kNClients:
      Require(IsIntegral(x) && x >= 1.0 &&
                  x <= static_cast<double>(cfg.dataset.total_clients()),
              field,
              fmt::format("n_clients must be an integer in [1, {}]",
                          cfg.dataset.total_clients()));
      break;
    case SweepAxis::kRounds:
      Require(IsIntegral(x) && x >= 1.0, field,
              "rounds must be an integer >= 1");
      break;
    case SweepAxis::kSubsample:
      Require(x > 0.0 && x <= 1.0, field, "subsample must be in (0, 1]");
      break;
  }
}

}  // namespace

ConfigError::ConfigError(std::string field, const std::string& message)
    : std::runtime_error(field + ": " + message), field_(std::move(field)) {}

std::string_view AxisName(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kZ:
      return "z";
    case SweepAxis::kV:
      return "v";
    case SweepAxis::kNClients:
      return "n_clients";
    case SweepAxis::kRounds:
      return "rounds";
    case SweepAxis::kSubsample:
      return "subsample";
  }
  return "?";
}

SweepAxis ParseAxis(std::string_view name) {
  for (SweepAxis axis : {SweepAxis::kZ, SweepAxis::kV, SweepAxis::kNClients,
                         SweepAxis::kRounds, SweepAxis::kSubsample}) {
    if (AxisName(axis) == name) return axis;
  }
  throw ConfigError("sweep", fmt::format("unknown axis \"{}\" (expected z, v, "
                                         "n_clients, rounds or subsample)",
                                         name));
}

namespace {

ExperimentConfig ParseUnvalidated(std::string_view text,
                                 std::string_view source) {
  toml::table root;
  try {
    root = toml::parse(text, source);
  } catch (const toml::parse_error& e) {
    const auto& begin = e.source().begin;
    throw ConfigError(fmt::format("{}:{}:{}", source, begin.line, begin.column),
                      std::string(e.description()));
  }
  ExperimentConfig cfg;
  TableReader r(&root, "");
  ReadDataset(r.Sub("dataset"), cfg.dataset);
  ReadPrivacy(r.Sub("privacy"), cfg.privacy);
  ReadMethod(r.Sub("method"), cfg.method);
  ReadTraining(r.Sub("training"), cfg.training);
  ReadRun(r.Sub("run"), cfg);
  ReadSweep(r.Sub("sweep"), cfg);
  r.RejectUnknown();
  return cfg;
}

}  // namespace

ExperimentConfig ParseConfig(std::string_view text, std::string_view source) {
  ExperimentConfig cfg = ParseUnvalidated(text, source);
  Validate(cfg);
  return cfg;
}

ExperimentConfig LoadConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot open " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  ExperimentConfig cfg = ParseUnvalidated(text.str(), path.string());
  // CSV paths are relative to the config file.
  for (auto& p : cfg.dataset.csv) {
    if (p.is_relative()) p = path.parent_path() / p;
  }
  Validate(cfg);
  return cfg;
}

void Validate(const ExperimentConfig& cfg) {
  const DatasetConfig& d = cfg.dataset;
  if (d.synthetic()) {
    Require(d.n_clients >= 1, "dataset.n_clients", "must be >= 1");
    Require(d.samples_per_client >= 2, "dataset.samples_per_client",
            "must be >= 2");
    Require(d.dim >= 1, "dataset.dim", "must be >= 1");
    Require(d.heterogeneity >= 0.0 && d.heterogeneity <= 1.0,
            "dataset.heterogeneity", "must be in [0, 1]");
    Require(std::isfinite(d.signal_norm) && d.signal_norm >= 0.0,
            "dataset.signal_norm", "must be >= 0");
  } else {
    for (std::size_t i = 0; i < d.csv.size(); ++i) {
      Require(std::filesystem::exists(d.csv[i]),
              fmt::format("dataset.csv[{}]", i),
              "file not found: " + d.csv[i].string());
    }
    Require(!d.label_column.empty(), "dataset.label_column",
            "must not be empty");
  }
  Require(d.test_fraction > 0.0 && d.test_fraction < 1.0,
          "dataset.test_fraction", "must be in (0, 1)");
  if (d.train_clients) {
    Require(*d.train_clients >= 1 && *d.train_clients <= d.total_clients(),
            "dataset.train_clients",
            fmt::format("must be in [1, {}]", d.total_clients()));
  }

  const PrivacyConfig& p = cfg.privacy;
  Require(std::isfinite(p.z) && p.z >= 0.0, "privacy.z", "must be >= 0");
  if (p.delta) {
    Require(*p.delta > 0.0 && *p.delta < 1.0, "privacy.delta",
            "must be in (0, 1)");
  }
  Require(p.rounds >= 1, "privacy.rounds", "must be >= 1");
  Require(p.subsample_ratio > 0.0 && p.subsample_ratio <= 1.0,
          "privacy.subsample_ratio", "must be in (0, 1]");

  const MethodConfig& m = cfg.method;
  Require(m.fixed_v >= 1, "method.fixed_v", "must be >= 1");
  if (d.synthetic() && !m.adaptive_intermediary) {
    const int test = static_cast<int>(
        std::ceil(d.test_fraction * d.samples_per_client));
    const int train = std::max(1, d.samples_per_client - test);
    Require(m.fixed_v <= train, "method.fixed_v",
            fmt::format("exceeds the {} training samples per client", train));
  }
  if (m.clip.initial_C) {
    Require(*m.clip.initial_C > 0.0, "method.clip.initial", "must be > 0");
  }
  Require(m.clip.eta_c > 0.0, "method.clip.eta_c", "must be > 0");
  Require(m.clip.gamma > 0.0 && m.clip.gamma < 1.0, "method.clip.gamma",
          "must be in (0, 1)");
  Require(m.clip.sigma_b >= 0.0, "method.clip.sigma_b", "must be >= 0");
  if (m.clip.sigma_b > 0.0 && p.z > 0.0) {
    Require(2.0 * m.clip.sigma_b > p.z, "method.clip.sigma_b",
            "must exceed z / 2 so the update keeps part of the budget");
  }
  Require(m.fedadam.server_lr > 0.0, "method.fedadam.server_lr",
          "must be > 0");
  Require(m.fedadam.beta1 >= 0.0 && m.fedadam.beta1 < 1.0,
          "method.fedadam.beta1", "must be in [0, 1)");
  Require(m.fedadam.beta2 >= 0.0 && m.fedadam.beta2 < 1.0,
          "method.fedadam.beta2", "must be in [0, 1)");
  Require(m.fedadam.tau > 0.0, "method.fedadam.tau", "must be > 0");

  const TrainingConfig& t = cfg.training;
  Require(t.eta > 0.0, "training.eta", "must be > 0");
  Require(t.epochs >= 1, "training.epochs", "must be >= 1");
  Require(t.batch_size >= 1, "training.batch_size", "must be >= 1");

  Require(!cfg.seeds.empty(), "run.seeds", "must not be empty");
  Require(!cfg.out.empty(), "run.out", "must not be empty");

  for (const auto& [axis, values] : cfg.sweep) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      ValidateAxisValue(cfg, axis, values[i],
                        fmt::format("sweep.{}[{}]", AxisName(axis), i));
    }
  }
}

double ResolveDelta(const ExperimentConfig& cfg) {
  if (cfg.privacy.delta) return *cfg.privacy.delta;
  return DeltaRule(cfg.dataset.active_clients());
}

SimulationConfig ToSimulationConfig(const ExperimentConfig& cfg,
                                    std::uint64_t seed) {
  SimulationConfig s;
  s.fed.local.eta = cfg.training.eta;
  s.fed.local.epochs = cfg.training.epochs;
  s.fed.local.batch_size = static_cast<std::size_t>(cfg.training.batch_size);
  s.fed.z = cfg.privacy.z;
  s.fed.optimizer = cfg.method.optimizer;
  s.fed.adam = cfg.method.fedadam;
  s.fed.clip = cfg.method.clip;
  s.fed.subsample_ratio = cfg.privacy.subsample_ratio;
  s.fed.seed = seed;
  s.rounds = cfg.privacy.rounds;
  s.adaptive = cfg.method.adaptive_intermediary;
  s.fixed_v = cfg.method.fixed_v;
  s.target_count = cfg.method.target_count;
  s.delta = ResolveDelta(cfg);
  return s;
}

SimulationData BuildData(const ExperimentConfig& cfg) {
  const DatasetConfig& d = cfg.dataset;
  std::vector<ClientDataset> clients;
  if (d.synthetic()) {
    GenerationOptions options;
    options.signal_norm = d.signal_norm;
    clients = GenerateFederation(d.n_clients, d.samples_per_client, d.dim,
                                 d.heterogeneity, d.seed, options);
  } else {
    for (std::size_t i = 0; i < d.csv.size(); ++i) {
      clients.push_back(
          LoadCsv(d.csv[i], d.label_column, static_cast<int>(i)));
      if (clients.back().size() < 2) {
        throw ConfigError(fmt::format("dataset.csv[{}]", i),
                          "needs at least 2 rows for the holdout split");
      }
      if (clients.back().feature_dim() != clients.front().feature_dim()) {
        throw ConfigError(
            fmt::format("dataset.csv[{}]", i),
            fmt::format("has {} features, expected {}",
                        clients.back().feature_dim(),
                        clients.front().feature_dim()));
      }
    }
  }
  SimulationData data = MakeSimulationData(clients, d.test_fraction, d.seed);
  data.train.resize(static_cast<std::size_t>(d.active_clients()));
  return data;
}

ExperimentConfig ApplyAxis(const ExperimentConfig& cfg, SweepAxis axis,
                           double value) {
  ExperimentConfig out = cfg;
  ValidateAxisValue(cfg, axis, value, fmt::format("sweep.{}", AxisName(axis)));
  switch (axis) {
    case SweepAxis::kZ:
      out.privacy.z = value;
      break;
    case SweepAxis::kV:
      out.method.adaptive_intermediary = false;
      out.method.fixed_v = static_cast<int>(value);
      break;
    case SweepAxis::kNClients:
      out.dataset.train_clients = static_cast<int>(value);
      break;
    case SweepAxis::kRounds:
      out.privacy.rounds = static_cast<int>(value);
      break;
    case SweepAxis::kSubsample:
      out.privacy.subsample_ratio = value;
      break;
  }
  Validate(out);
  return out;
}

}  // namespace fedsplit::cli
