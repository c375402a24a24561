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


#ifndef FEDSPLIT_CLI_REPORT_H_
#define FEDSPLIT_CLI_REPORT_H_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "fedsplit/cli/config.h"
#include "fedsplit/simulation.h"

namespace fedsplit::cli {

struct SeedRun {
  std::uint64_t seed = 0;
  RunTrace trace;
};

inline constexpr std::string_view kRoundsCsvHeader =
    "round,seed,xi,phi,lambda,clip_C,v,n_participants,train_loss,test_acc,"
    "test_auc,epsilon_so_far,guarded";

// Shortest round-trip decimal form; "inf" for infinity.
std::string FormatNumber(double x);

// One row per round, no header. `prefix` is prepended verbatim to every row
// (the sweep CSV uses it for its axis columns).
void WriteRoundRows(std::ostream& out, const SeedRun& run,
                    std::string_view prefix = "");

// Header plus the rows of every run, in the given order.
std::string RoundsCsv(std::span<const SeedRun> runs);

struct MeanStd {
  double mean = 0.0;
  // Sample standard deviation (n - 1); 0 for a single value.
  double std = 0.0;
};
MeanStd ComputeMeanStd(std::span<const double> values);

// Final-round statistics across seeds plus the run's privacy budget.
nlohmann::ordered_json Summarize(const ExperimentConfig& cfg,
                                 std::span<const SeedRun> runs);

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct ChartOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = false;
};

// Static SVG line chart. Non-finite points (and non-positive ones on a log
// axis) are skipped.
std::string RenderLineChart(std::span<const Series> series,
                            const ChartOptions& options);

// Across-seed mean per round of the levels (xi, phi, lambda) and of the test
// accuracy, as two charts.
std::string LevelsChart(std::span<const SeedRun> runs);
std::string AccuracyChart(std::span<const SeedRun> runs);

}  // namespace fedsplit::cli

#endif  // FEDSPLIT_CLI_REPORT_H_
