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

#include "latentprobe/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "latentprobe/error.hpp"
#include "latentprobe/kmeans.hpp"
#include "latentprobe/metrics.hpp"
#include "latentprobe/multicut.hpp"
#include "latentprobe/random.hpp"

namespace latentprobe {

CentroidClassifier::CentroidClassifier(const FeatureSet& train)
    : means_(Eigen::MatrixXd::Zero(train.class_count(), train.dim())), present_(train.class_count(), false) {
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(train.class_count());
  for (Index i = 0; i < train.size(); ++i) {
    const Label l = train.labels()[static_cast<std::size_t>(i)];
    means_.row(l) += train.row(i).cast<double>();
    counts(l) += 1.0;
  }
  for (Index l = 0; l < means_.rows(); ++l) {
    if (counts(l) > 0.0) {
      means_.row(l) /= counts(l);
      present_[static_cast<std::size_t>(l)] = true;
    }
  }
}

Label CentroidClassifier::Predict(const Eigen::RowVectorXd& x) const {
  Label best = 0;
  double best_distance = std::numeric_limits<double>::infinity();
  for (Index l = 0; l < means_.rows(); ++l) {
    if (!present_[static_cast<std::size_t>(l)]) continue;
    const double d = (x - means_.row(l)).squaredNorm();
    if (d < best_distance) {
      best_distance = d;
      best = static_cast<Label>(l);
    }
  }
  return best;
}

double CentroidClassifier::Accuracy(const FeatureSet& test) const {
  Require(test.dim() == means_.cols(), ErrorCode::kDimensionMismatch, "classifier dimension mismatch");
  std::size_t correct = 0;
  for (Index i = 0; i < test.size(); ++i) {
    if (Predict(test.row(i).cast<double>()) == test.labels()[static_cast<std::size_t>(i)]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(test.size());
}

std::vector<double> QuantileGrid(const FeatureSet& features, int points) {
  Require(points >= 1, ErrorCode::kInvalidArgument, "grid needs at least one point");
  std::vector<double> distances;
  for (Index i = 0; i < features.size(); ++i) {
    for (Index j = i + 1; j < features.size(); ++j) distances.push_back(PairwiseDistance(features, i, j));
  }
  Require(!distances.empty(), ErrorCode::kInvalidArgument, "grid needs at least two samples");
  std::sort(distances.begin(), distances.end());
  std::vector<double> grid;
  for (int p = 0; p < points; ++p) {
    const double q = points == 1 ? 0.05 : 0.05 + 0.55 * p / (points - 1);
    const auto idx = static_cast<std::size_t>(q * static_cast<double>(distances.size() - 1));
    const double value = std::max(distances[idx], std::numeric_limits<double>::min());
    if (grid.empty() || value > grid.back()) grid.push_back(value);
  }
  return grid;
}

std::vector<ZooModel> RunSyntheticZoo(const ZooOptions& options) {
  Require(!options.separations.empty(), ErrorCode::kInvalidArgument, "zoo needs at least one model");
  std::vector<ZooModel> zoo;
  for (std::size_t m = 0; m < options.separations.size(); ++m) {
    MixtureSpec spec;
    spec.class_count = options.class_count;
    spec.dim = options.dim;
    spec.per_class = options.per_class;
    spec.separation = options.separations[m];
    spec.seed = MixSeed(options.seed, 2 * m);
    const FeatureSet train = GenerateMixture(spec);
    spec.seed = MixSeed(options.seed, 2 * m + 1);
    const FeatureSet test = GenerateMixture(spec);
    const CentroidClassifier classifier(train);

    ZooModel model;
    std::ostringstream name;
    name << "synthetic-sep" << options.separations[m];
    model.record.name = name.str();
    model.record.clean_acc = 100.0 * classifier.Accuracy(test);
    std::vector<double> corrupted;
    model.delta_by_severity.push_back(OverlapDelta(ClassDistanceStats(test, true)));
    for (int s : options.corruption.severities) {
      const FeatureSet shifted = Corrupt(test, options.corruption, s);
      corrupted.push_back(100.0 * classifier.Accuracy(shifted));
      model.delta_by_severity.push_back(OverlapDelta(ClassDistanceStats(shifted, true)));
    }
    model.record.corruption_grid["drift_noise"] = corrupted;
    model.record.delta = model.delta_by_severity.front();

    KmeansOptions km;
    km.k = options.class_count;
    km.seed = MixSeed(options.seed, 1000 + m);
    const auto kmeans = Kmeans(test, km);
    model.record.kmeans_acc = 100.0 * ClusterAccuracy(kmeans.clustering, test.labels());
    model.record.kmeans_purity = 100.0 * Purity(kmeans.clustering, test.labels());

    const double temperature = DefaultTemperature(test, MixSeed(options.seed, 2000 + m));
    const auto grid = QuantileGrid(test, options.sweep_points);
    const SweepResult sweep = ThresholdSweep(test, grid, temperature, options.kl_passes);
    model.multicut_theta = sweep.best_theta;
    for (const auto& row : sweep.rows) {
      if (row.theta != sweep.best_theta) continue;
      model.record.mc_acc = 100.0 * row.accuracy;
      model.record.mc_purity = 100.0 * row.purity;
    }
    zoo.push_back(std::move(model));
  }
  return zoo;
}

}  // namespace latentprobe
