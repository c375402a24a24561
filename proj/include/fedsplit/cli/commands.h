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


#ifndef FEDSPLIT_CLI_COMMANDS_H_
#define FEDSPLIT_CLI_COMMANDS_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "fedsplit/cli/config.h"
#include "fedsplit/cli/report.h"
#include "fedsplit/theory.h"

namespace fedsplit::cli {

struct RunOptions {
  // Overrides run.out when set.
  std::optional<std::filesystem::path> out;
  // Replaces run.seeds with this single seed.
  std::optional<std::uint64_t> seed_override;
  // Concurrent runs (seeds, sweep points).
  int threads = 1;
  bool svg = false;
};

// Applies the overrides of `options` to `cfg`.
ExperimentConfig WithOverrides(ExperimentConfig cfg, const RunOptions& options);

// One simulation per seed of `cfg`, results in seed order.
std::vector<SeedRun> RunSeeds(const ExperimentConfig& cfg, int threads);

// Writes <out>/rounds.csv, <out>/summary.json and, with options.svg,
// <out>/levels.svg and <out>/accuracy.svg. Returns the process exit code.
int CmdRun(const ExperimentConfig& cfg, const RunOptions& options);

// One run per value of `axis` under <out>/<axis>_<value>/, plus the
// consolidated <out>/sweep.csv (axis and value columns before the per-round
// columns) and <out>/sweep_summary.json.
int CmdSweep(const ExperimentConfig& cfg, SweepAxis axis,
             const RunOptions& options);

struct CalibrateRequest {
  std::vector<double> z;
  std::vector<double> epsilon;
  int rounds = 100;
  double delta = 0.0;
};

// Prints z, rounds, delta, epsilon rows: epsilon computed from each given z,
// or z calibrated for each given epsilon. Exactly one list must be
// non-empty; otherwise prints a usage error to `err` and returns 2.
int CmdCalibrate(const CalibrateRequest& request, std::ostream& out,
                 std::ostream& err);

struct BoundsRequest {
  ConvexSpec spec;
  int trials = 2000;
  std::uint64_t seed = 1;
  std::filesystem::path out = "out";
};

struct BoundsRow {
  // Index of the bound; the estimate is taken after t + 1 descents.
  int t = 0;
  double bound = 0.0;
  double estimate = 0.0;
  double ci_half_width = 0.0;
  bool holds = true;
};

// Lower-bound check: estimate - ci_half_width >= bound for t = 0..steps-1.
std::vector<BoundsRow> BoundsTable(const BoundsRequest& request);

// Writes <out>/bounds.csv and prints the regime note and a PASS/FAIL line.
// Returns 0 iff every row holds.
int CmdBounds(const BoundsRequest& request, std::ostream& out);

}  // namespace fedsplit::cli

#endif  // FEDSPLIT_CLI_COMMANDS_H_
