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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "latentprobe/clustering.hpp"
#include "latentprobe/error.hpp"
#include "latentprobe/featureset.hpp"
#include "latentprobe/indicators.hpp"
#include "latentprobe/kmeans.hpp"
#include "latentprobe/metrics.hpp"
#include "latentprobe/multicut.hpp"
#include "latentprobe/pipeline.hpp"
#include "latentprobe/random.hpp"
#include "latentprobe/report.hpp"
#include "latentprobe/spectra.hpp"
#include "latentprobe/synth.hpp"

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;
using namespace latentprobe;

namespace {

constexpr char kDefaultFixture[] = "table2.json";

void Emit(const std::string& command, const Json& config, Json result, const std::string& json_path) {
  Json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["command"] = command;
  doc["config"] = config;
  doc["result"] = std::move(result);
  if (json_path.empty() || json_path == "-") {
    std::cout << doc.dump(2) << '\n';
  } else {
    WriteJson(doc, json_path);
  }
}

std::vector<std::string> SplitList(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

double ParseNumber(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const double value = std::stod(text, &used);
    if (used == text.size() && std::isfinite(value)) return value;
  } catch (const std::exception&) {
  }
  Fail(ErrorCode::kInvalidArgument, what + ": '" + text + "' is not a number");
}

std::vector<double> ParseNumbers(const std::string& text, const std::string& what) {
  std::vector<double> values;
  for (const auto& item : SplitList(text)) values.push_back(ParseNumber(item, what));
  Require(!values.empty(), ErrorCode::kInvalidArgument, what + " is empty");
  return values;
}

// Bundled fixtures may be named relative to the data directory.
fs::path ResolveFixture(const std::string& name) {
  const fs::path path(name);
  if (fs::exists(path) || path.is_absolute()) return path;
  const fs::path bundled = fs::path(LATENTPROBE_DATA_DIR) / path;
  return fs::exists(bundled) ? bundled : path;
}

Json LabelScores(const Clustering& clustering, const FeatureSet& features) {
  const auto sizes = clustering.ClusterSizes();
  Json j;
  j["cluster_count"] = clustering.cluster_count();
  j["cluster_sizes"] = sizes;
  j["singleton_fraction"] = SingletonFraction(clustering);
  j["accuracy"] = ClusterAccuracy(clustering, features.labels());
  j["purity"] = Purity(clustering, features.labels());
  return j;
}

Json SweepJson(const SweepResult& sweep) {
  Json rows = Json::array();
  for (const auto& r : sweep.rows) {
    rows.push_back({{"theta", r.theta},
                    {"accuracy", r.accuracy},
                    {"purity", r.purity},
                    {"cluster_count", r.cluster_count},
                    {"singleton_count", r.singleton_count}});
  }
  return {{"best_theta", sweep.best_theta}, {"rows", rows}};
}

void WriteCsvFile(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorCode::kIo, "cannot write " + path.string());
  out << text;
  if (!out) Fail(ErrorCode::kIo, "write failed for " + path.string());
}

struct GenSyntheticArgs {
  Label classes = 5;
  Index dim = 16;
  Index per_class = 40;
  double separation = 4.0;
  double noise_std = 1.0;
  std::uint64_t seed = 0;
  std::string severities = "1,2,3,4,5";
  double drift_scale = 0.3;
  double noise_growth = 0.3;
  std::optional<std::uint64_t> drift_seed;
  std::string out_dir;
  std::string format = "bin";
  std::string json;
};

void RunGenSynthetic(const GenSyntheticArgs& a) {
  MixtureSpec spec{a.classes, a.dim, a.per_class, a.separation, a.noise_std, a.seed};
  CorruptionSpec corruption;
  corruption.severities.clear();
  for (double s : ParseNumbers(a.severities, "severities")) {
    Require(s == std::floor(s) && s >= 1, ErrorCode::kInvalidArgument, "severities must be positive integers");
    corruption.severities.push_back(static_cast<int>(s));
  }
  corruption.drift_scale = a.drift_scale;
  corruption.noise_growth = a.noise_growth;
  corruption.drift_seed = a.drift_seed.value_or(a.seed);

  Json config{{"classes", a.classes},       {"dim", a.dim},
              {"per_class", a.per_class},   {"separation", a.separation},
              {"noise_std", a.noise_std},   {"seed", a.seed},
              {"severities", corruption.severities}, {"drift_scale", a.drift_scale},
              {"noise_growth", a.noise_growth}, {"drift_seed", corruption.drift_seed},
              {"out_dir", a.out_dir},       {"format", a.format}};

  const FeatureSet clean = GenerateMixture(spec);
  fs::create_directories(a.out_dir);
  const std::string ext = a.format == "csv" ? ".csv" : ".bin";
  auto save = [&](const FeatureSet& f, const fs::path& path) {
    if (a.format == "csv") {
      SaveFeaturesCsv(f, path);
    } else {
      SaveFeatures(f, path);
    }
  };
  Json files = Json::array();
  const fs::path clean_path = fs::path(a.out_dir) / ("clean" + ext);
  save(clean, clean_path);
  files.push_back({{"severity", 0}, {"path", clean_path.string()}, {"rows", clean.size()}, {"dim", clean.dim()}});
  for (int s : corruption.severities) {
    const fs::path path = fs::path(a.out_dir) / ("severity_" + std::to_string(s) + ext);
    const FeatureSet corrupted = Corrupt(clean, corruption, s);
    save(corrupted, path);
    files.push_back({{"severity", s}, {"path", path.string()}, {"rows", corrupted.size()}, {"dim", corrupted.dim()}});
  }
  Emit("gen-synthetic", config, {{"files", files}}, a.json);
}

struct KmeansArgs {
  std::string features;
  KmeansOptions options;
  std::string out;
  std::string json;
};

void RunKmeans(const KmeansArgs& a) {
  const FeatureSet features = LoadFeatures(a.features);
  const auto result = Kmeans(features, a.options);
  if (!a.out.empty()) SaveClustering(result.clustering, a.out);

  Json config{{"features", a.features},
              {"k", a.options.k},
              {"seed", a.options.seed},
              {"max_iter", a.options.max_iter},
              {"tol", a.options.tol},
              {"restarts", a.options.restarts},
              {"out", a.out}};
  Json centroids = Json::array();
  for (Index c = 0; c < result.centroids.rows(); ++c) {
    Json values = Json::array();
    for (Index j = 0; j < result.centroids.cols(); ++j) values.push_back(result.centroids(c, j));
    centroids.push_back(values);
  }
  Json out = LabelScores(result.clustering, features);
  out["objective"] = result.objective;
  out["iterations"] = result.iterations;
  out["converged"] = result.converged;
  out["objective_trace"] = result.objective_trace;
  out["centroids"] = centroids;
  out["assignment"] = std::vector<ClusterId>(result.clustering.assignment().begin(),
                                             result.clustering.assignment().end());
  Emit("kmeans", config, out, a.json);
}

struct MulticutArgs {
  std::string features;
  std::optional<double> theta;
  std::string sweep;
  std::string temperature = "auto";
  std::string sweep_csv;
  Index chunks = 1;
  Index max_chunk = 4096;
  Index subset_size = 0;
  std::uint64_t seed = 0;
  int jobs = 1;
  int kl_passes = 10;
  std::string out;
  std::string json;
};

void RunMulticut(const MulticutArgs& a) {
  Require(a.theta.has_value() != !a.sweep.empty(), ErrorCode::kInvalidArgument,
          "give exactly one of --theta or --sweep");
  FeatureSet features = LoadFeatures(a.features);
  if (a.subset_size > 0 && a.subset_size < features.size()) {
    std::vector<Index> rows(static_cast<std::size_t>(features.size()));
    std::iota(rows.begin(), rows.end(), Index{0});
    Rng rng(MixSeed(a.seed, 7));
    rng.Shuffle(std::span<Index>(rows));
    rows.resize(static_cast<std::size_t>(a.subset_size));
    std::sort(rows.begin(), rows.end());
    features = features.Subset(rows);
  }
  const double temperature = a.temperature == "auto" ? DefaultTemperature(features, a.seed)
                                                     : ParseNumber(a.temperature, "--temperature");
  Require(a.max_chunk >= 2, ErrorCode::kInvalidArgument, "--max-chunk must be at least 2");
  const Index needed = (features.size() + a.max_chunk - 1) / a.max_chunk;
  const Index chunks = std::max(a.chunks, needed);

  Json result;
  double theta = a.theta.value_or(0.0);
  if (!a.sweep.empty()) {
    Require(features.size() <= a.max_chunk, ErrorCode::kInvalidArgument,
            "threshold sweep solves the full graph; use --subset-size to stay within --max-chunk");
    const SweepResult sweep = ThresholdSweep(features, ParseGrid(a.sweep), temperature, a.kl_passes);
    theta = sweep.best_theta;
    result["sweep"] = SweepJson(sweep);
    if (!a.sweep_csv.empty()) {
      std::ostringstream csv;
      WriteSweepCsv(sweep, csv);
      WriteCsvFile(a.sweep_csv, csv.str());
    }
  }
  ParallelOptions options;
  options.chunks = chunks;
  options.theta = theta;
  options.temperature = temperature;
  options.seed = a.seed;
  options.jobs = a.jobs;
  options.kl_passes = a.kl_passes;
  const Clustering clustering = ClusterParallel(features, options);
  if (!a.out.empty()) SaveClustering(clustering, a.out);

  Json config{{"features", a.features},
              {"theta", a.theta ? Json(*a.theta) : Json(nullptr)},
              {"sweep", a.sweep},
              {"temperature", a.temperature},
              {"chunks", a.chunks},
              {"max_chunk", a.max_chunk},
              {"subset_size", a.subset_size},
              {"seed", a.seed},
              {"jobs", a.jobs},
              {"kl_passes", a.kl_passes},
              {"out", a.out},
              {"sweep_csv", a.sweep_csv}};
  Json scores = LabelScores(clustering, features);
  result["theta"] = theta;
  result["temperature"] = temperature;
  result["chunks_used"] = chunks;
  result["rows"] = features.size();
  for (auto& [key, value] : scores.items()) result[key] = value;
  if (features.size() <= a.max_chunk) {
    result["objective"] = MulticutObjective(BuildCostGraph(features, theta, temperature), clustering);
  } else {
    result["objective"] = nullptr;
  }
  Emit("multicut", config, result, a.json);
}

struct MetricsArgs {
  std::string features;
  std::string clustering;
  bool normalize = false;
  std::string json;
};

void RunMetrics(const MetricsArgs& a) {
  const FeatureSet features = LoadFeatures(a.features);
  Json result;
  if (!a.clustering.empty()) {
    const Clustering clustering = LoadClustering(a.clustering);
    Require(clustering.size() == static_cast<std::size_t>(features.size()), ErrorCode::kSizeMismatch,
            "clustering covers " + std::to_string(clustering.size()) + " items, features have " +
                std::to_string(features.size()));
    result["acc"] = ClusterAccuracy(clustering, features.labels());
    result["purity"] = Purity(clustering, features.labels());
    result["singleton_fraction"] = SingletonFraction(clustering);
    result["cluster_count"] = clustering.cluster_count();
  }
  const DistanceStats stats = ClassDistanceStats(features, a.normalize);
  result["delta"] = OverlapDelta(stats);
  result["stats"] = ToJson(stats);
  Json config{{"features", a.features}, {"pred", a.clustering}, {"normalize", a.normalize}};
  Emit("metrics", config, result, a.json);
}

struct RecordsArgs {
  std::string fixture = kDefaultFixture;
  std::string records;
  std::string json;
};

std::vector<ModelRecord> LoadRecordsFor(const RecordsArgs& a, fs::path& source) {
  source = a.records.empty() ? ResolveFixture(a.fixture) : fs::path(a.records);
  return LoadRecords(source);
}

void RunIndicators(const RecordsArgs& a) {
  fs::path source;
  const auto records = LoadRecordsFor(a, source);
  Json models = Json::array();
  for (const auto& r : records) {
    const CorruptionAggregate aggregate = AggregateCorruptionAccuracy(r.corruption_grid);
    Json values = Json::object();
    for (Indicator i : AllIndicators()) {
      try {
        values[IndicatorName(i)] = IndicatorValue(r, i);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kSchema) throw;
        values[IndicatorName(i)] = nullptr;
      }
    }
    std::vector<double> by_severity;
    for (std::size_t s = 1; s <= aggregate.per_severity.size(); ++s) {
      by_severity.push_back(MeasuredRobustness(r, static_cast<int>(s)));
    }
    models.push_back({{"name", r.name},
                      {"clean", r.clean_acc},
                      {"acc_all", aggregate.overall},
                      {"printed_acc_all", r.printed_acc_all ? Json(*r.printed_acc_all) : Json(nullptr)},
                      {"per_severity", aggregate.per_severity},
                      {"robustness", MeasuredRobustness(r, std::nullopt)},
                      {"robustness_by_severity", by_severity},
                      {"indicators", values}});
  }
  Json config{{"source", source.filename().string()}};
  Emit("indicators", config, {{"models", models}}, a.json);
}

struct CorrelateArgs {
  RecordsArgs records;
  std::string indicator = "combined_purity";
  std::optional<int> severity;
  std::string scatter_csv;
  std::string svg;
  bool svg_timestamp = false;
};

void RunCorrelate(const CorrelateArgs& a) {
  fs::path source;
  const auto records = LoadRecordsFor(a.records, source);
  const Indicator indicator = ParseIndicator(a.indicator);
  const CorrelationReport report = Correlate(records, indicator, a.severity);
  if (!a.scatter_csv.empty() || !a.svg.empty()) {
    Require(!a.scatter_csv.empty(), ErrorCode::kInvalidArgument, "--svg needs --scatter-csv");
    SvgOptions svg;
    svg.title = a.indicator + (a.severity ? " (severity " + std::to_string(*a.severity) + ")" : "");
    svg.x_label = "indicator " + a.indicator;
    svg.timestamp_comment = a.svg_timestamp;
    const std::optional<fs::path> svg_path = a.svg.empty() ? std::nullopt : std::optional<fs::path>(a.svg);
    EmitScatter(ScatterOf(report), report.fit, a.scatter_csv, svg_path, svg);
  }
  Json config{{"source", source.filename().string()},
              {"indicator", a.indicator},
              {"severity", a.severity ? Json(*a.severity) : Json(nullptr)},
              {"scatter_csv", a.scatter_csv},
              {"svg", a.svg},
              {"svg_timestamp", a.svg_timestamp}};
  Emit("correlate", config, ToJson(report), a.records.json);
}

struct PcaArgs {
  std::string features;
  std::string thresholds = "0.75,0.80";
  std::string reduce_to;
  std::string out;
  std::string project2d;
  std::string json;
};

void WriteProjection(const FeatureSet& features, const fs::path& path) {
  const Eigen::MatrixXd points = features.data().cast<double>();
  const auto profile = PcaProfile(points);
  const Index m = std::min<Index>(2, features.dim());
  const Eigen::MatrixXd projected = Project(points, profile, m);
  std::ostringstream csv;
  csv << "index,label,pc1,pc2\n";
  char buffer[96];
  for (Index i = 0; i < features.size(); ++i) {
    std::snprintf(buffer, sizeof buffer, "%.17g,%.17g", projected(i, 0), m > 1 ? projected(i, 1) : 0.0);
    csv << i << ',' << features.labels()[static_cast<std::size_t>(i)] << ',' << buffer << '\n';
  }
  WriteCsvFile(path, csv.str());
}

void RunPca(const PcaArgs& a) {
  const FeatureSet features = LoadFeatures(a.features);
  const auto profile = PcaProfile(features);
  const std::vector<double> thresholds = ParseNumbers(a.thresholds, "--threshold");
  Json at = Json::array();
  for (double t : thresholds) at.push_back({{"threshold", t}, {"components", ComponentsForRatio(profile, t)}});

  Json result;
  result["rows"] = features.size();
  result["dim"] = features.dim();
  result["eigenvalues"] = std::vector<double>(profile.eigenvalues.data(),
                                              profile.eigenvalues.data() + profile.eigenvalues.size());
  result["ratios"] = std::vector<double>(profile.ratios.data(), profile.ratios.data() + profile.ratios.size());
  result["cumulative"] = std::vector<double>(profile.cumulative.data(),
                                             profile.cumulative.data() + profile.cumulative.size());
  result["components_at"] = at;
  result["reduced_dim"] = nullptr;
  if (!a.reduce_to.empty()) {
    const Index m = a.reduce_to == "auto" ? ComponentsForRatio(profile, thresholds.front())
                                          : static_cast<Index>(ParseNumber(a.reduce_to, "--reduce-to"));
    const FeatureSet reduced = Reduce(features, m);
    if (!a.out.empty()) SaveFeatures(reduced, a.out);
    result["reduced_dim"] = m;
  }
  if (!a.project2d.empty()) WriteProjection(features, a.project2d);
  Json config{{"features", a.features},
              {"thresholds", thresholds},
              {"reduce_to", a.reduce_to},
              {"out", a.out},
              {"project2d", a.project2d}};
  Emit("pca", config, result, a.json);
}

struct Project2dArgs {
  std::string features;
  std::string out;
  std::string json;
};

void RunProject2d(const Project2dArgs& a) {
  const FeatureSet features = LoadFeatures(a.features);
  WriteProjection(features, a.out);
  Json config{{"features", a.features}, {"out", a.out}};
  Emit("project2d", config, {{"rows", features.size()}, {"columns", {"pc1", "pc2"}}}, a.json);
}

struct ReportArgs {
  ZooOptions zoo;
  std::string separations = "2,3,4,5,6";
  std::string severities = "1,2,3,4,5";
  std::string indicator = "combined_purity";
  std::string scatter_csv;
  std::string svg;
  bool svg_timestamp = false;
  std::string json;
};

void RunReport(ReportArgs a) {
  a.zoo.separations = ParseNumbers(a.separations, "--separations");
  a.zoo.corruption.severities.clear();
  for (double s : ParseNumbers(a.severities, "--severities")) {
    Require(s == std::floor(s) && s >= 1, ErrorCode::kInvalidArgument, "severities must be positive integers");
    a.zoo.corruption.severities.push_back(static_cast<int>(s));
  }
  const Indicator chosen = ParseIndicator(a.indicator);
  const auto zoo = RunSyntheticZoo(a.zoo);

  std::vector<ModelRecord> records;
  Json models = Json::array();
  for (const auto& m : zoo) {
    records.push_back(m.record);
    Json j = ToJson(m.record);
    j["robustness"] = MeasuredRobustness(m.record, std::nullopt);
    j["delta_by_severity"] = m.delta_by_severity;
    j["delta_non_decreasing"] = std::is_sorted(m.delta_by_severity.begin(), m.delta_by_severity.end());
    j["multicut_theta"] = m.multicut_theta;
    models.push_back(j);
  }
  Json correlations = Json::array();
  for (Indicator i : AllIndicators()) correlations.push_back(ToJson(Correlate(records, i)));
  if (!a.scatter_csv.empty() || !a.svg.empty()) {
    Require(!a.scatter_csv.empty(), ErrorCode::kInvalidArgument, "--svg needs --scatter-csv");
    const CorrelationReport report = Correlate(records, chosen);
    SvgOptions svg;
    svg.title = "synthetic zoo: " + a.indicator;
    svg.x_label = "indicator " + a.indicator;
    svg.timestamp_comment = a.svg_timestamp;
    const std::optional<fs::path> svg_path = a.svg.empty() ? std::nullopt : std::optional<fs::path>(a.svg);
    EmitScatter(ScatterOf(report), report.fit, a.scatter_csv, svg_path, svg);
  }
  Json config{{"seed", a.zoo.seed},
              {"separations", a.zoo.separations},
              {"classes", a.zoo.class_count},
              {"dim", a.zoo.dim},
              {"per_class", a.zoo.per_class},
              {"severities", a.zoo.corruption.severities},
              {"drift_scale", a.zoo.corruption.drift_scale},
              {"noise_growth", a.zoo.corruption.noise_growth},
              {"drift_seed", a.zoo.corruption.drift_seed},
              {"sweep_points", a.zoo.sweep_points},
              {"kl_passes", a.zoo.kl_passes},
              {"indicator", a.indicator},
              {"scatter_csv", a.scatter_csv},
              {"svg", a.svg},
              {"svg_timestamp", a.svg_timestamp}};
  Emit("report", config, {{"models", models}, {"correlations", correlations}}, a.json);
}

void PrintError(const std::string& code, const std::string& message) {
  const Json doc{{"error", {{"code", code}, {"message", message}}}};
  std::cerr << doc.dump() << '\n';
}

void AddSeed(CLI::App* app, std::uint64_t& seed) {
  app->add_option("--seed", seed, "random seed")->envname("LATENTPROBE_SEED")->capture_default_str();
}

void AddJson(CLI::App* app, std::string& json) {
  app->add_option("--json", json, "report JSON path (stdout when omitted)");
}

void AddRecords(CLI::App* app, RecordsArgs& r) {
  auto* fixture = app->add_option("--fixture", r.fixture, "bundled or explicit fixture JSON")->capture_default_str();
  app->add_option("--records", r.records, "records JSON with explicit corruption grids")->excludes(fixture);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"latentprobe: clusterability of latent feature spaces and robustness indicators"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "help for every subcommand");

  GenSyntheticArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-synthetic", "write a Gaussian mixture and its corrupted copies");
  gen_cmd->add_option("--classes", gen.classes)->capture_default_str()->check(CLI::Range(2u, 1u << 20));
  gen_cmd->add_option("--dim", gen.dim)->capture_default_str()->check(CLI::PositiveNumber);
  gen_cmd->add_option("--per-class", gen.per_class)->capture_default_str()->check(CLI::PositiveNumber);
  gen_cmd->add_option("--separation", gen.separation)->capture_default_str()->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--noise-std", gen.noise_std)->capture_default_str()->check(CLI::PositiveNumber);
  gen_cmd->add_option("--severities", gen.severities)->capture_default_str();
  gen_cmd->add_option("--drift-scale", gen.drift_scale)->capture_default_str();
  gen_cmd->add_option("--noise-growth", gen.noise_growth)->capture_default_str()->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--drift-seed", gen.drift_seed, "defaults to --seed");
  gen_cmd->add_option("--out-dir", gen.out_dir)->required();
  gen_cmd->add_option("--format", gen.format)->capture_default_str()->check(CLI::IsMember({"bin", "csv"}));
  AddSeed(gen_cmd, gen.seed);
  AddJson(gen_cmd, gen.json);

  KmeansArgs km;
  auto* km_cmd = app.add_subcommand("kmeans", "Lloyd k-means with k-means++ seeding");
  km_cmd->add_option("--features", km.features)->required();
  km_cmd->add_option("--k", km.options.k)->capture_default_str()->check(CLI::PositiveNumber);
  km_cmd->add_option("--max-iter", km.options.max_iter)->capture_default_str()->check(CLI::PositiveNumber);
  km_cmd->add_option("--tol", km.options.tol)->capture_default_str()->check(CLI::NonNegativeNumber);
  km_cmd->add_option("--restarts", km.options.restarts)->capture_default_str()->check(CLI::PositiveNumber);
  km_cmd->add_option("--out", km.out, "clustering file");
  AddSeed(km_cmd, km.options.seed);
  AddJson(km_cmd, km.json);

  MulticutArgs mc;
  auto* mc_cmd = app.add_subcommand("multicut", "minimum cost multicut (GAEC + KL)");
  mc_cmd->add_option("--features", mc.features)->required();
  auto* theta = mc_cmd->add_option("--theta", mc.theta, "distance threshold")->check(CLI::PositiveNumber);
  mc_cmd->add_option("--sweep", mc.sweep, "threshold grid a:b:step")->excludes(theta);
  mc_cmd->add_option("--temperature", mc.temperature, "'auto' or a positive number")->capture_default_str();
  mc_cmd->add_option("--sweep-csv", mc.sweep_csv);
  mc_cmd->add_option("--chunks", mc.chunks)->capture_default_str()->check(CLI::PositiveNumber);
  mc_cmd->add_option("--max-chunk", mc.max_chunk, "largest graph solved directly")->capture_default_str();
  mc_cmd->add_option("--subset-size", mc.subset_size, "seeded row subset, 0 = all")->capture_default_str();
  mc_cmd->add_option("--jobs", mc.jobs)->capture_default_str()->check(CLI::PositiveNumber);
  mc_cmd->add_option("--kl-passes", mc.kl_passes)->capture_default_str()->check(CLI::NonNegativeNumber);
  mc_cmd->add_option("--out", mc.out, "clustering file");
  AddSeed(mc_cmd, mc.seed);
  AddJson(mc_cmd, mc.json);

  MetricsArgs met;
  auto* met_cmd = app.add_subcommand("metrics", "cluster accuracy, purity and class distance statistics");
  met_cmd->add_option("--features", met.features)->required();
  met_cmd->add_option("--pred,--clustering", met.clustering, "clustering file");
  met_cmd->add_flag("--normalize", met.normalize, "divide distance statistics by the mean pair distance");
  AddJson(met_cmd, met.json);

  RecordsArgs ind;
  auto* ind_cmd = app.add_subcommand("indicators", "indicator values and robustness per model");
  AddRecords(ind_cmd, ind);
  AddJson(ind_cmd, ind.json);

  CorrelateArgs cor;
  auto* cor_cmd = app.add_subcommand("correlate", "R^2 and Kendall tau between an indicator and robustness");
  AddRecords(cor_cmd, cor.records);
  cor_cmd->add_option("--indicator", cor.indicator)->capture_default_str();
  cor_cmd->add_option("--severity", cor.severity)->check(CLI::PositiveNumber);
  cor_cmd->add_option("--scatter-csv", cor.scatter_csv);
  cor_cmd->add_option("--svg", cor.svg);
  cor_cmd->add_flag("--svg-timestamp", cor.svg_timestamp);
  AddJson(cor_cmd, cor.records.json);

  PcaArgs pca;
  auto* pca_cmd = app.add_subcommand("pca", "explained variance profile and reduction");
  pca_cmd->add_option("--features", pca.features)->required();
  pca_cmd->add_option("--threshold", pca.thresholds, "comma-separated cumulative ratios")->capture_default_str();
  pca_cmd->add_option("--reduce-to", pca.reduce_to, "'auto' or a component count");
  pca_cmd->add_option("--out", pca.out, "reduced feature container");
  pca_cmd->add_option("--project2d", pca.project2d, "2-D projection CSV");
  AddJson(pca_cmd, pca.json);

  Project2dArgs p2;
  auto* p2_cmd = app.add_subcommand("project2d", "2-D PCA scatter CSV");
  p2_cmd->add_option("--features", p2.features)->required();
  p2_cmd->add_option("--out", p2.out)->required();
  AddJson(p2_cmd, p2.json);

  ReportArgs rep;
  auto* rep_cmd = app.add_subcommand("report", "synthetic model zoo end to end");
  rep_cmd->add_option("--separations", rep.separations)->capture_default_str();
  rep_cmd->add_option("--classes", rep.zoo.class_count)->capture_default_str();
  rep_cmd->add_option("--dim", rep.zoo.dim)->capture_default_str();
  rep_cmd->add_option("--per-class", rep.zoo.per_class)->capture_default_str();
  rep_cmd->add_option("--severities", rep.severities)->capture_default_str();
  rep_cmd->add_option("--drift-scale", rep.zoo.corruption.drift_scale)->capture_default_str();
  rep_cmd->add_option("--noise-growth", rep.zoo.corruption.noise_growth)->capture_default_str();
  rep_cmd->add_option("--drift-seed", rep.zoo.corruption.drift_seed)->capture_default_str();
  rep_cmd->add_option("--sweep-points", rep.zoo.sweep_points)->capture_default_str();
  rep_cmd->add_option("--kl-passes", rep.zoo.kl_passes)->capture_default_str();
  rep_cmd->add_option("--indicator", rep.indicator)->capture_default_str();
  rep_cmd->add_option("--scatter-csv", rep.scatter_csv);
  rep_cmd->add_option("--svg", rep.svg);
  rep_cmd->add_flag("--svg-timestamp", rep.svg_timestamp);
  AddSeed(rep_cmd, rep.zoo.seed);
  AddJson(rep_cmd, rep.json);

  if (argc <= 1) {
    std::cout << app.help();
    return 2;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    PrintError("usage", e.what());
    return 2;
  }

  try {
    if (*gen_cmd) RunGenSynthetic(gen);
    if (*km_cmd) RunKmeans(km);
    if (*mc_cmd) RunMulticut(mc);
    if (*met_cmd) RunMetrics(met);
    if (*ind_cmd) RunIndicators(ind);
    if (*cor_cmd) RunCorrelate(cor);
    if (*pca_cmd) RunPca(pca);
    if (*p2_cmd) RunProject2d(p2);
    if (*rep_cmd) RunReport(rep);
  } catch (const Error& e) {
    PrintError(std::string(ErrorCodeName(e.code())), e.what());
    return 1;
  } catch (const std::exception& e) {
    PrintError("internal", e.what());
    return 1;
  }
  return 0;
}
