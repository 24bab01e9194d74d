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

#include <cstdint>
#include <vector>

#include "latentprobe/featureset.hpp"
#include "latentprobe/indicators.hpp"
#include "latentprobe/synth.hpp"

namespace latentprobe {

// Nearest-class-mean classifier; stands in for a trained model's head on
// synthetic latent spaces.
class CentroidClassifier {
 public:
  explicit CentroidClassifier(const FeatureSet& train);
  Label Predict(const Eigen::RowVectorXd& x) const;
  double Accuracy(const FeatureSet& test) const;  // fraction in [0, 1]

 private:
  Eigen::MatrixXd means_;
  std::vector<bool> present_;
};

struct ZooOptions {
  std::vector<double> separations = {2.0, 3.0, 4.0, 5.0, 6.0};
  Label class_count = 5;
  Index dim = 16;
  Index per_class = 40;
  CorruptionSpec corruption;
  std::uint64_t seed = 0;
  int sweep_points = 12;  // multicut thresholds tried per model
  int kl_passes = 10;
};

struct ZooModel {
  ModelRecord record;
  // Normalized overlap delta on the clean test set (index 0) and at each
  // severity of the corruption (index s).
  std::vector<double> delta_by_severity;
  double multicut_theta = 0.0;
};

// One synthetic "model" per separation: clean accuracy and per-severity
// corrupted accuracy of the centroid classifier, k-means (k = classes) and
// multicut scores on clean test features, and the overlap baseline.
std::vector<ZooModel> RunSyntheticZoo(const ZooOptions& options);

// Thresholds at evenly spaced quantiles (5%..60%) of the pairwise distances.
std::vector<double> QuantileGrid(const FeatureSet& features, int points);

}  // namespace latentprobe
