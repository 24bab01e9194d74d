// Copyright 2026 The LatentProbe Authors
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

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace latentprobe {

// Accuracies are stored as percentages, exactly as printed in benchmark
// tables; the indicator math below works on their ratios.
struct ModelRecord {
  std::string name;
  double clean_acc = 0.0;
  // corruption -> accuracy per severity 1..S
  std::map<std::string, std::vector<double>> corruption_grid;
  std::optional<double> printed_acc_all;  // ACC*_all as published, if known
  std::optional<double> kmeans_acc, kmeans_purity, mc_acc, mc_purity;
  std::optional<double> delta;  // class-overlap baseline
};

double Robustness(double acc_corrupt, double acc_clean);

struct CorruptionAggregate {
  double overall = 0.0;
  std::vector<double> per_severity;  // index s-1
  std::map<std::string, double> per_corruption;
};

// Mean over corruptions of the mean over severities; the grid must be
// rectangular.
CorruptionAggregate AggregateCorruptionAccuracy(const std::map<std::string, std::vector<double>>& grid);

double RelativePerformance(double cluster_perf, double model_acc);

// (kmeans_purity * mc_purity) / model_acc on fractions.
double CombinedPurity(double kmeans_purity, double mc_purity, double model_acc);

// Coefficient of determination of the least-squares line of ys on xs.
double RSquared(std::span<const double> xs, std::span<const double> ys);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};
LineFit FitLine(std::span<const double> xs, std::span<const double> ys);

// Kendall tau-b.
double KendallTau(std::span<const double> a, std::span<const double> b);

enum class Indicator {
  kKmeansAcc,
  kKmeansPurity,
  kMulticutAcc,
  kMulticutPurity,
  kCombinedAcc,
  kCombinedPurity,
  kDeltaBaseline,
};

Indicator ParseIndicator(const std::string& name);
std::string IndicatorName(Indicator indicator);
std::vector<Indicator> AllIndicators();

// Indicator value for one model, oriented so that larger predicts more
// robust (the overlap baseline enters as -delta).
double IndicatorValue(const ModelRecord& record, Indicator indicator);

// Clean-relative corrupted accuracy: ACC*_all (the published value when
// present) or, with a severity, the mean over corruptions at that level.
double MeasuredRobustness(const ModelRecord& record, std::optional<int> severity);

struct ModelPoint {
  std::string name;
  double indicator = 0.0;
  double robustness = 0.0;
};

struct CorrelationReport {
  Indicator indicator = Indicator::kCombinedPurity;
  std::optional<int> severity;
  std::vector<ModelPoint> points;  // input order
  double r_squared = 0.0;
  double kendall_tau = 0.0;
  LineFit fit;
  // Rank 1 = most robust; ties broken by name.
  std::vector<std::string> predicted_ranking;
  std::vector<std::string> actual_ranking;
};

CorrelationReport Correlate(std::span<const ModelRecord> records, Indicator indicator,
                            std::optional<int> severity = std::nullopt);

// JSON records: either the bundled benchmark fixture layout or a list of
// models with explicit corruption grids.
std::vector<ModelRecord> LoadRecords(const std::filesystem::path& path);
std::vector<ModelRecord> ParseRecords(const std::string& json_text);

}  // namespace latentprobe
