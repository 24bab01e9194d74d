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

#include "latentprobe/indicators.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "latentprobe/error.hpp"

namespace latentprobe {
namespace {

using nlohmann::json;

double Mean(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

void CheckPair(std::span<const double> xs, std::span<const double> ys, std::size_t min_size) {
  Require(xs.size() == ys.size(), ErrorCode::kSizeMismatch, "paired samples differ in length");
  Require(xs.size() >= min_size, ErrorCode::kInvalidArgument,
          "need at least " + std::to_string(min_size) + " paired samples");
}

double Percentage(const json& node, const std::string& what) {
  Require(node.is_number(), ErrorCode::kSchema, what + " must be a number");
  const double value = node.get<double>();
  Require(value >= 0.0 && value <= 100.0, ErrorCode::kSchema, what + " must be a percentage in [0, 100]");
  return value;
}

std::vector<double> SeverityRow(const json& node, const std::string& what) {
  Require(node.is_array() && !node.empty(), ErrorCode::kSchema, what + " must be a non-empty array");
  std::vector<double> row;
  for (const auto& v : node) row.push_back(Percentage(v, what));
  return row;
}

ModelRecord ParseModel(const json& m) {
  Require(m.is_object(), ErrorCode::kSchema, "each model must be an object");
  ModelRecord r;
  Require(m.contains("name") && m["name"].is_string(), ErrorCode::kSchema, "model needs a string name");
  r.name = m["name"].get<std::string>();
  const std::string where = "model '" + r.name + "': ";
  Require(m.contains("clean"), ErrorCode::kSchema, where + "missing clean accuracy");
  r.clean_acc = Percentage(m["clean"], where + "clean");
  const bool has_means = m.contains("severity");
  const bool has_grid = m.contains("corruptions");
  Require(has_means != has_grid, ErrorCode::kSchema,
          where + "give exactly one of 'severity' (means over corruptions) or 'corruptions'");
  if (has_means) {
    // Published tables list severity means over all corruptions; they form
    // a one-row grid.
    r.corruption_grid["mean"] = SeverityRow(m["severity"], where + "severity");
  } else {
    Require(m["corruptions"].is_object() && !m["corruptions"].empty(), ErrorCode::kSchema,
            where + "'corruptions' must map names to severity arrays");
    for (const auto& [name, row] : m["corruptions"].items()) {
      r.corruption_grid[name] = SeverityRow(row, where + name);
    }
  }
  if (m.contains("acc_all")) r.printed_acc_all = Percentage(m["acc_all"], where + "acc_all");
  auto scores = [&](const char* key, std::optional<double>& acc, std::optional<double>& purity) {
    if (!m.contains(key)) return;
    const auto& node = m[key];
    Require(node.is_object(), ErrorCode::kSchema, where + key + " must be an object");
    if (node.contains("acc")) acc = Percentage(node["acc"], where + key + ".acc");
    if (node.contains("purity")) purity = Percentage(node["purity"], where + key + ".purity");
  };
  scores("kmeans", r.kmeans_acc, r.kmeans_purity);
  scores("multicut", r.mc_acc, r.mc_purity);
  if (m.contains("delta")) {
    Require(m["delta"].is_number(), ErrorCode::kSchema, where + "delta must be a number");
    r.delta = m["delta"].get<double>();
  }
  return r;
}

double Need(const std::optional<double>& value, const ModelRecord& r, const char* field) {
  Require(value.has_value(), ErrorCode::kSchema, "model '" + r.name + "' lacks " + field);
  return *value;
}

std::vector<std::string> RankDescending(const std::vector<ModelPoint>& points, bool by_indicator) {
  std::vector<const ModelPoint*> order;
  for (const auto& p : points) order.push_back(&p);
  std::stable_sort(order.begin(), order.end(), [by_indicator](const ModelPoint* a, const ModelPoint* b) {
    const double va = by_indicator ? a->indicator : a->robustness;
    const double vb = by_indicator ? b->indicator : b->robustness;
    if (va != vb) return va > vb;
    return a->name < b->name;
  });
  std::vector<std::string> names;
  for (const auto* p : order) names.push_back(p->name);
  return names;
}

}  // namespace

double Robustness(double acc_corrupt, double acc_clean) {
  Require(acc_clean > 0.0, ErrorCode::kInvalidArgument, "clean accuracy must be positive");
  return acc_corrupt / acc_clean;
}

CorruptionAggregate AggregateCorruptionAccuracy(const std::map<std::string, std::vector<double>>& grid) {
  Require(!grid.empty(), ErrorCode::kInvalidArgument, "corruption grid is empty");
  const std::size_t levels = grid.begin()->second.size();
  Require(levels >= 1, ErrorCode::kInvalidArgument, "corruption grid has no severities");
  CorruptionAggregate result;
  result.per_severity.assign(levels, 0.0);
  for (const auto& [name, row] : grid) {
    Require(row.size() == levels, ErrorCode::kInvalidArgument,
            "ragged corruption grid: '" + name + "' has " + std::to_string(row.size()) + " severities");
    const double mean = Mean(row);
    result.per_corruption[name] = mean;
    result.overall += mean;
    for (std::size_t s = 0; s < levels; ++s) result.per_severity[s] += row[s];
  }
  const auto corruptions = static_cast<double>(grid.size());
  result.overall /= corruptions;
  for (double& v : result.per_severity) v /= corruptions;
  return result;
}

double RelativePerformance(double cluster_perf, double model_acc) {
  Require(model_acc > 0.0, ErrorCode::kInvalidArgument, "model accuracy must be positive");
  return cluster_perf / model_acc;
}

double CombinedPurity(double kmeans_purity, double mc_purity, double model_acc) {
  Require(model_acc > 0.0, ErrorCode::kInvalidArgument, "model accuracy must be positive");
  return (kmeans_purity / 100.0) * (mc_purity / 100.0) / (model_acc / 100.0);
}

LineFit FitLine(std::span<const double> xs, std::span<const double> ys) {
  CheckPair(xs, ys, 2);
  const double mx = Mean(xs), my = Mean(ys);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  Require(sxx > 0.0, ErrorCode::kInvalidArgument, "x values are all equal; no line fit exists");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  return fit;
}

double RSquared(std::span<const double> xs, std::span<const double> ys) {
  CheckPair(xs, ys, 3);
  const LineFit fit = FitLine(xs, ys);
  const double my = Mean(ys);
  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (fit.slope * xs[i] + fit.intercept);
    ss_res += r * r;
    ss_tot += (ys[i] - my) * (ys[i] - my);
  }
  if (ss_tot == 0.0) return 0.0;
  return 1.0 - ss_res / ss_tot;
}

double KendallTau(std::span<const double> a, std::span<const double> b) {
  CheckPair(a, b, 2);
  double concordant = 0.0, discordant = 0.0, ties_a = 0.0, ties_b = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      const double da = a[i] - a[j];
      const double db = b[i] - b[j];
      if (da == 0.0) ties_a += 1.0;
      if (db == 0.0) ties_b += 1.0;
      if (da == 0.0 || db == 0.0) continue;
      ((da > 0.0) == (db > 0.0) ? concordant : discordant) += 1.0;
    }
  }
  const double pairs = static_cast<double>(a.size() * (a.size() - 1) / 2);
  const double denominator = std::sqrt((pairs - ties_a) * (pairs - ties_b));
  Require(denominator > 0.0, ErrorCode::kInvalidArgument, "Kendall tau undefined: input is all tied");
  return (concordant - discordant) / denominator;
}

Indicator ParseIndicator(const std::string& name) {
  for (Indicator i : AllIndicators()) {
    if (IndicatorName(i) == name) return i;
  }
  Fail(ErrorCode::kInvalidArgument, "unknown indicator '" + name + "'");
}

std::string IndicatorName(Indicator indicator) {
  switch (indicator) {
    case Indicator::kKmeansAcc: return "kmeans_acc";
    case Indicator::kKmeansPurity: return "kmeans_purity";
    case Indicator::kMulticutAcc: return "multicut_acc";
    case Indicator::kMulticutPurity: return "multicut_purity";
    case Indicator::kCombinedAcc: return "combined_acc";
    case Indicator::kCombinedPurity: return "combined_purity";
    case Indicator::kDeltaBaseline: return "delta_baseline";
  }
  return "unknown";
}

std::vector<Indicator> AllIndicators() {
  return {Indicator::kKmeansAcc,      Indicator::kKmeansPurity,  Indicator::kMulticutAcc,
          Indicator::kMulticutPurity, Indicator::kCombinedAcc,   Indicator::kCombinedPurity,
          Indicator::kDeltaBaseline};
}

double IndicatorValue(const ModelRecord& r, Indicator indicator) {
  switch (indicator) {
    case Indicator::kKmeansAcc: return RelativePerformance(Need(r.kmeans_acc, r, "kmeans.acc"), r.clean_acc);
    case Indicator::kKmeansPurity:
      return RelativePerformance(Need(r.kmeans_purity, r, "kmeans.purity"), r.clean_acc);
    case Indicator::kMulticutAcc: return RelativePerformance(Need(r.mc_acc, r, "multicut.acc"), r.clean_acc);
    case Indicator::kMulticutPurity:
      return RelativePerformance(Need(r.mc_purity, r, "multicut.purity"), r.clean_acc);
    case Indicator::kCombinedAcc:
      return CombinedPurity(Need(r.kmeans_acc, r, "kmeans.acc"), Need(r.mc_acc, r, "multicut.acc"), r.clean_acc);
    case Indicator::kCombinedPurity:
      return CombinedPurity(Need(r.kmeans_purity, r, "kmeans.purity"), Need(r.mc_purity, r, "multicut.purity"),
                            r.clean_acc);
    case Indicator::kDeltaBaseline: return -Need(r.delta, r, "delta");
  }
  Fail(ErrorCode::kInvalidArgument, "unknown indicator");
}

double MeasuredRobustness(const ModelRecord& record, std::optional<int> severity) {
  const CorruptionAggregate aggregate = AggregateCorruptionAccuracy(record.corruption_grid);
  if (severity) {
    Require(*severity >= 1 && static_cast<std::size_t>(*severity) <= aggregate.per_severity.size(),
            ErrorCode::kInvalidArgument, "severity " + std::to_string(*severity) + " not in the grid");
    return Robustness(aggregate.per_severity[static_cast<std::size_t>(*severity - 1)], record.clean_acc);
  }
  return Robustness(record.printed_acc_all.value_or(aggregate.overall), record.clean_acc);
}

CorrelationReport Correlate(std::span<const ModelRecord> records, Indicator indicator, std::optional<int> severity) {
  Require(records.size() >= 3, ErrorCode::kInvalidArgument, "correlation needs at least three models");
  CorrelationReport report;
  report.indicator = indicator;
  report.severity = severity;
  std::vector<double> xs, ys;
  for (const auto& record : records) {
    ModelPoint point{record.name, IndicatorValue(record, indicator), MeasuredRobustness(record, severity)};
    xs.push_back(point.indicator);
    ys.push_back(point.robustness);
    report.points.push_back(std::move(point));
  }
  report.r_squared = RSquared(xs, ys);
  report.kendall_tau = KendallTau(xs, ys);
  report.fit = FitLine(xs, ys);
  report.predicted_ranking = RankDescending(report.points, true);
  report.actual_ranking = RankDescending(report.points, false);
  return report;
}

std::vector<ModelRecord> ParseRecords(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    Fail(ErrorCode::kSchema, std::string("records are not valid JSON: ") + e.what());
  }
  Require(doc.is_object() && doc.contains("models") && doc["models"].is_array(), ErrorCode::kSchema,
          "records need a 'models' array");
  std::vector<ModelRecord> records;
  for (const auto& m : doc["models"]) records.push_back(ParseModel(m));
  return records;
}

std::vector<ModelRecord> LoadRecords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kIo, "cannot open records file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseRecords(buffer.str());
}

}  // namespace latentprobe
