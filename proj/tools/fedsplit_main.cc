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


// Command-line entry point: run, calibrate, sweep, bounds.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "fedsplit/accountant.h"
#include "fedsplit/cli/commands.h"
#include "fedsplit/cli/config.h"

namespace {

// FEDSPLIT_LOG=error|info|debug; info when unset.
void ConfigureLogging() {
  auto logger = spdlog::stderr_color_mt("fedsplit");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%H:%M:%S] [%^%l%$] %v");
  spdlog::set_level(spdlog::level::info);
  const char* env = std::getenv("FEDSPLIT_LOG");
  if (env == nullptr) return;
  const std::string level = env;
  if (level == "error") {
    spdlog::set_level(spdlog::level::err);
  } else if (level == "debug") {
    spdlog::set_level(spdlog::level::debug);
  } else if (level != "info") {
    spdlog::warn("FEDSPLIT_LOG={} not recognized; using info", level);
  }
}

}  // namespace

int main(int argc, char** argv) {
  ConfigureLogging();
  namespace cli = fedsplit::cli;

  CLI::App app{"Differentially private federated learning with adaptive "
               "intermediaries"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed_override;
  int threads = 1;
  bool svg = false;
  auto add_run_flags = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "Experiment config (TOML)")
        ->required();
    sub->add_option("--out", out_dir, "Output directory (overrides run.out)");
    sub->add_option("--seed-override", seed_override,
                    "Run this single seed instead of run.seeds");
    sub->add_option("--threads", threads, "Concurrent runs")
        ->check(CLI::PositiveNumber);
    sub->add_flag("--svg", svg, "Also write SVG charts");
  };

  CLI::App* run = app.add_subcommand("run", "Run every seed of a config");
  add_run_flags(run);

  CLI::App* sweep = app.add_subcommand("sweep", "Run a config over one axis");
  add_run_flags(sweep);
  std::string axis_name;
  sweep->add_option("--axis", axis_name,
                    "z, v, n_clients, rounds or subsample (default: the only "
                    "axis listed in [sweep])");

  CLI::App* calibrate =
      app.add_subcommand("calibrate", "Convert between z and epsilon");
  cli::CalibrateRequest cal;
  std::optional<double> cal_delta;
  std::optional<int> cal_clients;
  calibrate->add_option("--z", cal.z, "Noise multipliers")->delimiter(',');
  calibrate->add_option("--epsilon", cal.epsilon, "Target epsilons")
      ->delimiter(',');
  calibrate->add_option("--rounds,-T", cal.rounds, "Rounds")
      ->default_val(100);
  auto* delta_opt = calibrate->add_option("--delta", cal_delta, "delta");
  calibrate
      ->add_option("--clients", cal_clients,
                   "Derive delta from the client count instead of --delta")
      ->excludes(delta_opt);

  CLI::App* bounds = app.add_subcommand(
      "bounds", "Monte Carlo check of the DP-SGD variance lower bound");
  cli::BoundsRequest br;
  bounds->add_option("--mu", br.spec.mu)->default_val(1.0);
  bounds->add_option("--beta", br.spec.beta)->default_val(1.0);
  bounds->add_option("--eta", br.spec.eta)->default_val(0.1);
  bounds->add_option("--sigma", br.spec.sigma)->default_val(1.0);
  bounds->add_option("--K", br.spec.K)->default_val(1);
  bounds->add_option("--steps", br.spec.steps)->default_val(50);
  bounds->add_option("--dim", br.spec.dim)->default_val(1);
  bounds->add_option("--trials", br.trials)->default_val(2000);
  bounds->add_option("--seed", br.seed)->default_val(1);
  std::string bounds_out = "out";
  bounds->add_option("--out", bounds_out, "Output directory");

  CLI11_PARSE(app, argc, argv);

  cli::RunOptions options;
  if (!out_dir.empty()) options.out = out_dir;
  options.seed_override = seed_override;
  options.threads = threads;
  options.svg = svg;

  try {
    if (run->parsed()) {
      return cli::CmdRun(cli::LoadConfig(config_path), options);
    }
    if (sweep->parsed()) {
      const cli::ExperimentConfig cfg = cli::LoadConfig(config_path);
      cli::SweepAxis axis;
      if (!axis_name.empty()) {
        axis = cli::ParseAxis(axis_name);
      } else if (cfg.sweep.size() == 1) {
        axis = cfg.sweep.begin()->first;
      } else {
        std::cerr << "sweep: pass --axis; the config lists "
                  << cfg.sweep.size() << " axes\n";
        return 2;
      }
      return cli::CmdSweep(cfg, axis, options);
    }
    if (calibrate->parsed()) {
      if (cal_delta) {
        cal.delta = *cal_delta;
      } else if (cal_clients) {
        cal.delta = fedsplit::DeltaRule(*cal_clients);
      } else {
        std::cerr << "calibrate: give --delta or --clients\n";
        return 2;
      }
      return cli::CmdCalibrate(cal, std::cout, std::cerr);
    }
    if (bounds->parsed()) {
      br.out = bounds_out;
      return cli::CmdBounds(br, std::cout);
    }
  } catch (const cli::ConfigError& e) {
    spdlog::error("invalid config: {}", e.what());
    return 2;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
  return 0;
}
