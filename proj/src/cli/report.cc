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


#include "fedsplit/cli/report.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "fedsplit/accountant.h"

namespace fedsplit::cli {
namespace {

int ReportedV(const RoundReport& r) {
  if (r.v_per_client.empty()) return 0;
  return *std::max_element(r.v_per_client.begin(), r.v_per_client.end());
}

nlohmann::ordered_json Stat(std::span<const double> values) {
  const MeanStd ms = ComputeMeanStd(values);
  nlohmann::ordered_json j;
  j["mean"] = ms.mean;
  j["std"] = ms.std;
  j["values"] = std::vector<double>(values.begin(), values.end());
  return j;
}

std::string XmlEscape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                    "#9467bd", "#ff7f0e", "#17becf"};

// Per-round mean over seeds of `field`.
template <typename F>
Series MeanSeries(std::span<const SeedRun> runs, std::string name, F field) {
  Series s;
  s.name = std::move(name);
  if (runs.empty()) return s;
  const std::size_t rounds = runs.front().trace.reports.size();
  for (std::size_t t = 0; t < rounds; ++t) {
    double sum = 0.0;
    for (const SeedRun& run : runs) sum += field(run.trace.reports[t]);
    s.x.push_back(static_cast<double>(runs.front().trace.reports[t].round));
    s.y.push_back(sum / static_cast<double>(runs.size()));
  }
  return s;
}

}  // namespace

std::string FormatNumber(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return fmt::format("{}", x);
}

void WriteRoundRows(std::ostream& out, const SeedRun& run,
                    std::string_view prefix) {
  const auto& reports = run.trace.reports;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const RoundReport& r = reports[i];
    const double eps = i < run.trace.epsilon_so_far.size()
                           ? run.trace.epsilon_so_far[i]
                           : std::numeric_limits<double>::infinity();
    out << prefix << r.round << ',' << run.seed << ',' << FormatNumber(r.xi)
        << ',' << FormatNumber(r.phi) << ',' << FormatNumber(r.lambda) << ','
        << FormatNumber(r.C) << ',' << ReportedV(r) << ',' << r.n_participants
        << ',' << FormatNumber(r.train_loss) << ',' << FormatNumber(r.test_acc)
        << ',' << FormatNumber(r.test_auc) << ',' << FormatNumber(eps) << ','
        << (r.guarded ? 1 : 0) << '\n';
  }
}

std::string RoundsCsv(std::span<const SeedRun> runs) {
  std::ostringstream out;
  out << kRoundsCsvHeader << '\n';
  for (const SeedRun& run : runs) WriteRoundRows(out, run);
  return out.str();
}

MeanStd ComputeMeanStd(std::span<const double> values) {
  MeanStd out;
  if (values.empty()) return out;
  const double n = static_cast<double>(values.size());
  out.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.std = std::sqrt(ss / (n - 1.0));
  }
  return out;
}

nlohmann::ordered_json Summarize(const ExperimentConfig& cfg,
                                 std::span<const SeedRun> runs) {
  std::vector<double> acc, auc, loss, v, clip;
  std::vector<std::uint64_t> seeds;
  int guarded = 0;
  int undefined_auc = 0;
  for (const SeedRun& run : runs) {
    seeds.push_back(run.seed);
    if (run.trace.reports.empty()) continue;
    const RoundReport& last = run.trace.reports.back();
    acc.push_back(last.test_acc);
    auc.push_back(last.test_auc);
    loss.push_back(last.train_loss);
    v.push_back(static_cast<double>(ReportedV(last)));
    clip.push_back(last.C);
    for (const RoundReport& r : run.trace.reports) {
      guarded += r.guarded ? 1 : 0;
      undefined_auc += r.auc_defined ? 0 : 1;
    }
  }

  const double delta = ResolveDelta(cfg);
  const PrivacyBudget budget =
      BudgetFor(cfg.privacy.z, cfg.privacy.rounds, delta,
                cfg.privacy.subsample_ratio);

  nlohmann::ordered_json j;
  j["seeds"] = seeds;
  j["rounds"] = cfg.privacy.rounds;
  j["clients"] = cfg.dataset.active_clients();
  nlohmann::ordered_json method;
  method["optimizer"] = std::string(OptimizerName(cfg.method.optimizer));
  method["adaptive_intermediary"] = cfg.method.adaptive_intermediary;
  method["fixed_v"] = cfg.method.fixed_v;
  j["method"] = method;
  nlohmann::ordered_json privacy;
  privacy["z"] = cfg.privacy.z;
  privacy["delta"] = delta;
  privacy["delta_source"] = cfg.privacy.delta ? "explicit" : "rule";
  // JSON has no infinity; a non-private run reports null.
  privacy["epsilon"] = std::isfinite(budget.epsilon)
                           ? nlohmann::ordered_json(budget.epsilon)
                           : nlohmann::ordered_json(nullptr);
  privacy["sampling_ratio"] = budget.sampling_ratio;
  j["privacy"] = privacy;
  nlohmann::ordered_json final_stats;
  final_stats["test_acc"] = Stat(acc);
  final_stats["test_auc"] = Stat(auc);
  final_stats["train_loss"] = Stat(loss);
  final_stats["v"] = Stat(v);
  final_stats["clip_C"] = Stat(clip);
  j["final"] = final_stats;
  j["guarded_rounds"] = guarded;
  j["undefined_auc_rounds"] = undefined_auc;
  return j;
}

std::string RenderLineChart(std::span<const Series> series,
                            const ChartOptions& options) {
  constexpr double kWidth = 720.0, kHeight = 420.0;
  constexpr double kLeft = 70.0, kRight = 150.0, kTop = 40.0, kBottom = 50.0;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;

  auto usable = [&](double y) {
    return std::isfinite(y) && (!options.log_y || y > 0.0);
  };
  auto ty = [&](double y) { return options.log_y ? std::log10(y) : y; };

  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_lo = x_lo, y_hi = -x_lo;
  for (const Series& s : series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !usable(s.y[i])) continue;
      x_lo = std::min(x_lo, s.x[i]);
      x_hi = std::max(x_hi, s.x[i]);
      y_lo = std::min(y_lo, ty(s.y[i]));
      y_hi = std::max(y_hi, ty(s.y[i]));
    }
  }
  if (!std::isfinite(x_lo)) {
    x_lo = 0.0, x_hi = 1.0, y_lo = 0.0, y_hi = 1.0;
  }
  if (x_hi == x_lo) x_hi = x_lo + 1.0;
  if (y_hi == y_lo) {
    y_lo -= 0.5;
    y_hi += 0.5;
  }
  auto px = [&](double x) { return kLeft + (x - x_lo) / (x_hi - x_lo) * plot_w; };
  auto py = [&](double y) {
    return kTop + plot_h - (ty(y) - y_lo) / (y_hi - y_lo) * plot_h;
  };

  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" "
      "height=\"{1}\" viewBox=\"0 0 {0} {1}\" font-family=\"sans-serif\" "
      "font-size=\"12\">\n"
      "<rect width=\"{0}\" height=\"{1}\" fill=\"white\"/>\n"
      "<text x=\"{2}\" y=\"24\" font-size=\"15\" text-anchor=\"middle\">{3}"
      "</text>\n"
      "<rect x=\"{4}\" y=\"{5}\" width=\"{6}\" height=\"{7}\" fill=\"none\" "
      "stroke=\"#444\"/>\n",
      kWidth, kHeight, kLeft + plot_w / 2, XmlEscape(options.title), kLeft,
      kTop, plot_w, plot_h);

  constexpr int kTicks = 5;
  for (int i = 0; i <= kTicks; ++i) {
    const double fx = x_lo + (x_hi - x_lo) * i / kTicks;
    const double gx = px(fx);
    svg += fmt::format(
        "<line x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{0:.1f}\" y2=\"{2:.1f}\" "
        "stroke=\"#ddd\"/>\n<text x=\"{0:.1f}\" y=\"{3:.1f}\" "
        "text-anchor=\"middle\">{4:.4g}</text>\n",
        gx, kTop, kTop + plot_h, kTop + plot_h + 16, fx);
    const double fy = y_lo + (y_hi - y_lo) * i / kTicks;
    const double gy = kTop + plot_h - plot_h * i / kTicks;
    const double label = options.log_y ? std::pow(10.0, fy) : fy;
    svg += fmt::format(
        "<line x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{2:.1f}\" y2=\"{1:.1f}\" "
        "stroke=\"#ddd\"/>\n<text x=\"{3:.1f}\" y=\"{4:.1f}\" "
        "text-anchor=\"end\">{5:.4g}</text>\n",
        kLeft, gy, kLeft + plot_w, kLeft - 6, gy + 4, label);
  }
  svg += fmt::format(
      "<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{}</text>\n",
      kLeft + plot_w / 2, kHeight - 12, XmlEscape(options.x_label));
  svg += fmt::format(
      "<text transform=\"translate(16 {:.1f}) rotate(-90)\" "
      "text-anchor=\"middle\">{}{}</text>\n",
      kTop + plot_h / 2, XmlEscape(options.y_label),
      options.log_y ? " (log)" : "");

  for (std::size_t k = 0; k < series.size(); ++k) {
    const Series& s = series[k];
    const char* color = kPalette[k % std::size(kPalette)];
    std::string points;
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !usable(s.y[i])) continue;
      points += fmt::format("{:.2f},{:.2f} ", px(s.x[i]), py(s.y[i]));
    }
    if (!points.empty()) points.pop_back();
    svg += fmt::format(
        "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" "
        "points=\"{}\"/>\n",
        color, points);
    const double ly = kTop + 14 + 18 * static_cast<double>(k);
    svg += fmt::format(
        "<line x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{2:.1f}\" y2=\"{1:.1f}\" "
        "stroke=\"{3}\" stroke-width=\"2\"/>\n<text x=\"{4:.1f}\" "
        "y=\"{5:.1f}\">{6}</text>\n",
        kLeft + plot_w + 12, ly, kLeft + plot_w + 32, color,
        kLeft + plot_w + 38, ly + 4, XmlEscape(s.name));
  }
  svg += "</svg>\n";
  return svg;
}

std::string LevelsChart(std::span<const SeedRun> runs) {
  const std::vector<Series> series = {
      MeanSeries(runs, "xi", [](const RoundReport& r) { return r.xi; }),
      MeanSeries(runs, "phi", [](const RoundReport& r) { return r.phi; }),
      MeanSeries(runs, "lambda", [](const RoundReport& r) { return r.lambda; }),
  };
  return RenderLineChart(series, {"Noise and diversity levels", "round",
                                  "level (mean over seeds)", true});
}

std::string AccuracyChart(std::span<const SeedRun> runs) {
  std::vector<Series> series;
  for (const SeedRun& run : runs) {
    Series s;
    s.name = fmt::format("seed {}", run.seed);
    for (const RoundReport& r : run.trace.reports) {
      s.x.push_back(r.round);
      s.y.push_back(r.test_acc);
    }
    series.push_back(std::move(s));
  }
  series.push_back(MeanSeries(runs, "mean",
                              [](const RoundReport& r) { return r.test_acc; }));
  return RenderLineChart(series, {"Test accuracy", "round", "accuracy", false});
}

}  // namespace fedsplit::cli
