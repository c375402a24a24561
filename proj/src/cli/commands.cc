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


#include "fedsplit/cli/commands.h"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <fmt/format.h>
#include <fmt/ostream.h>
#include <spdlog/spdlog.h>

#include "fedsplit/accountant.h"
#include "fedsplit/parallel.h"

namespace fedsplit::cli {
namespace {

namespace fs = std::filesystem;

void WriteFile(const fs::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << contents;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string SeedCsv(const SeedRun& run) {
  std::ostringstream out;
  out << kRoundsCsvHeader << '\n';
  WriteRoundRows(out, run);
  return out.str();
}

SeedRun RunOne(const ExperimentConfig& cfg, const SimulationData& data,
               std::uint64_t seed) {
  spdlog::debug("seed {}: starting {} rounds", seed, cfg.privacy.rounds);
  SeedRun run{seed, RunSimulation(data, ToSimulationConfig(cfg, seed))};
  const RoundReport& last = run.trace.reports.back();
  spdlog::info("seed {}: final test_acc={:.4f} auc={:.4f} v={}", seed,
               last.test_acc, last.test_auc,
               last.v_per_client.empty() ? 0 : last.v_per_client.front());
  return run;
}

// Writes the per-run and merged artifacts of one configuration into `dir`.
void WriteRunArtifacts(const ExperimentConfig& cfg,
                       std::span<const SeedRun> runs, const fs::path& dir,
                       bool svg) {
  fs::create_directories(dir / "runs");
  for (const SeedRun& run : runs) {
    WriteFile(dir / "runs" / fmt::format("seed_{}.csv", run.seed),
              SeedCsv(run));
  }
  WriteFile(dir / "rounds.csv", RoundsCsv(runs));
  WriteFile(dir / "summary.json", Summarize(cfg, runs).dump(2) + "\n");
  if (svg) {
    WriteFile(dir / "levels.svg", LevelsChart(runs));
    WriteFile(dir / "accuracy.svg", AccuracyChart(runs));
  }
}

double MeanOverRounds(std::span<const SeedRun> runs,
                      double RoundReport::*field) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const SeedRun& run : runs) {
    for (const RoundReport& r : run.trace.reports) {
      sum += r.*field;
      ++n;
    }
  }
  return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

}  // namespace

ExperimentConfig WithOverrides(ExperimentConfig cfg, const RunOptions& options) {
  if (options.out) cfg.out = *options.out;
  if (options.seed_override) cfg.seeds = {*options.seed_override};
  Validate(cfg);
  return cfg;
}

std::vector<SeedRun> RunSeeds(const ExperimentConfig& cfg, int threads) {
  Validate(cfg);
  const SimulationData data = BuildData(cfg);
  std::vector<SeedRun> runs(cfg.seeds.size());
  ParallelFor(runs.size(), threads,
              [&](std::size_t i) { runs[i] = RunOne(cfg, data, cfg.seeds[i]); });
  return runs;
}

int CmdRun(const ExperimentConfig& base, const RunOptions& options) {
  const ExperimentConfig cfg = WithOverrides(base, options);
  const std::vector<SeedRun> runs = RunSeeds(cfg, options.threads);
  WriteRunArtifacts(cfg, runs, cfg.out, options.svg);
  spdlog::info("wrote {}", (cfg.out / "rounds.csv").string());
  return 0;
}

int CmdSweep(const ExperimentConfig& base, SweepAxis axis,
             const RunOptions& options) {
  const ExperimentConfig cfg = WithOverrides(base, options);
  const auto it = cfg.sweep.find(axis);
  if (it == cfg.sweep.end()) {
    throw ConfigError(fmt::format("sweep.{}", AxisName(axis)),
                      "no values listed for this axis");
  }
  const std::vector<double>& values = it->second;

  std::vector<ExperimentConfig> points;
  std::vector<SimulationData> data;
  for (double value : values) {
    points.push_back(ApplyAxis(cfg, axis, value));
    data.push_back(BuildData(points.back()));
  }

  // Every (point, seed) pair is an independent job.
  struct Job {
    std::size_t point;
    std::size_t seed;
  };
  std::vector<Job> jobs;
  for (std::size_t p = 0; p < points.size(); ++p) {
    for (std::size_t s = 0; s < points[p].seeds.size(); ++s) {
      jobs.push_back({p, s});
    }
  }
  std::vector<std::vector<SeedRun>> results(points.size());
  for (std::size_t p = 0; p < points.size(); ++p) {
    results[p].resize(points[p].seeds.size());
  }
  ParallelFor(jobs.size(), options.threads, [&](std::size_t j) {
    const Job& job = jobs[j];
    const ExperimentConfig& pc = points[job.point];
    results[job.point][job.seed] =
        RunOne(pc, data[job.point], pc.seeds[job.seed]);
  });

  fs::create_directories(cfg.out);
  std::ostringstream sweep_csv;
  sweep_csv << "axis,value," << kRoundsCsvHeader << '\n';
  nlohmann::ordered_json summary;
  summary["axis"] = std::string(AxisName(axis));
  summary["points"] = nlohmann::ordered_json::array();
  for (std::size_t p = 0; p < points.size(); ++p) {
    const std::string value = FormatNumber(values[p]);
    WriteRunArtifacts(points[p], results[p],
                      cfg.out / fmt::format("{}_{}", AxisName(axis), value),
                      options.svg);
    const std::string prefix = fmt::format("{},{},", AxisName(axis), value);
    for (const SeedRun& run : results[p]) {
      WriteRoundRows(sweep_csv, run, prefix);
    }
    nlohmann::ordered_json point;
    point["value"] = values[p];
    nlohmann::ordered_json levels;
    levels["xi"] = MeanOverRounds(results[p], &RoundReport::xi);
    levels["phi"] = MeanOverRounds(results[p], &RoundReport::phi);
    levels["lambda"] = MeanOverRounds(results[p], &RoundReport::lambda);
    point["mean_levels"] = levels;
    point["summary"] = Summarize(points[p], results[p]);
    summary["points"].push_back(point);
  }
  WriteFile(cfg.out / "sweep.csv", sweep_csv.str());
  WriteFile(cfg.out / "sweep_summary.json", summary.dump(2) + "\n");
  spdlog::info("wrote {}", (cfg.out / "sweep.csv").string());
  return 0;
}

int CmdCalibrate(const CalibrateRequest& request, std::ostream& out,
                 std::ostream& err) {
  if (request.z.empty() == request.epsilon.empty()) {
    err << "calibrate: give exactly one of --z or --epsilon\n";
    return 2;
  }
  if (request.rounds < 1 || !(request.delta > 0.0 && request.delta < 1.0)) {
    err << "calibrate: need rounds >= 1 and delta in (0, 1)\n";
    return 2;
  }
  fmt::print(out, "{:>12} {:>8} {:>10} {:>14}\n", "z", "rounds", "delta",
             "epsilon");
  if (!request.z.empty()) {
    for (double z : request.z) {
      if (!(z > 0.0)) {
        err << "calibrate: z must be > 0\n";
        return 2;
      }
      fmt::print(out, "{:>12.6g} {:>8} {:>10.3g} {:>14.6g}\n", z,
                 request.rounds, request.delta,
                 EpsilonFor(z, request.rounds, request.delta));
    }
  } else {
    for (double eps : request.epsilon) {
      if (!(eps > 0.0)) {
        err << "calibrate: epsilon must be > 0\n";
        return 2;
      }
      fmt::print(out, "{:>12.6g} {:>8} {:>10.3g} {:>14.6g}\n",
                 CalibrateZ(eps, request.rounds, request.delta), request.rounds,
                 request.delta, eps);
    }
  }
  return 0;
}

std::vector<BoundsRow> BoundsTable(const BoundsRequest& request) {
  ValidateSpec(request.spec);
  const std::vector<DivergencePoint> points =
      MonteCarloDivergence(request.spec, request.trials, request.seed);
  std::vector<BoundsRow> rows;
  for (int t = 0; t < request.spec.steps; ++t) {
    const DivergencePoint& p = points[static_cast<std::size_t>(t) + 1];
    BoundsRow row;
    row.t = t;
    // + 0.0 folds the -0 a zero sigma produces.
    row.bound = VarianceLowerBound(request.spec, t) + 0.0;
    row.estimate = p.estimate;
    row.ci_half_width = p.ci_half_width;
    row.holds = row.estimate - row.ci_half_width >= row.bound;
    rows.push_back(row);
  }
  return rows;
}

int CmdBounds(const BoundsRequest& request, std::ostream& out) {
  const std::vector<BoundsRow> rows = BoundsTable(request);
  std::ostringstream csv;
  csv << "t,bound,estimate,ci_half_width,lower,holds\n";
  int failures = 0;
  int first_failure = -1;
  for (const BoundsRow& r : rows) {
    csv << r.t << ',' << FormatNumber(r.bound) << ','
        << FormatNumber(r.estimate) << ',' << FormatNumber(r.ci_half_width)
        << ',' << FormatNumber(r.estimate - r.ci_half_width) << ','
        << (r.holds ? 1 : 0) << '\n';
    if (!r.holds) {
      ++failures;
      if (first_failure < 0) first_failure = r.t;
    }
  }
  fs::create_directories(request.out);
  WriteFile(request.out / "bounds.csv", csv.str());

  const ConvexSpec& s = request.spec;
  const double a = s.RateBase();
  if (a >= 1.0) {
    fmt::print(out, "divergent regime: a = {:.6g} >= 1, the bound grows "
                    "without limit\n", a);
  } else {
    const double plateau = s.eta * s.eta * s.sigma * s.sigma /
                           ((2.0 * s.eta * s.beta - s.eta * s.eta * s.mu * s.mu) *
                            s.K * s.K);
    fmt::print(out, "convergent regime: a = {:.6g} < 1, the bound plateaus "
                    "at {:.6g}\n", a, plateau);
  }
  if (failures == 0) {
    fmt::print(out, "PASS bounds: estimate - CI >= bound at all {} points\n",
               rows.size());
    return 0;
  }
  fmt::print(out,
             "FAIL bounds: {} of {} points below the bound (first at t={})\n",
             failures, rows.size(), first_failure);
  return 1;
}

}  // namespace fedsplit::cli
