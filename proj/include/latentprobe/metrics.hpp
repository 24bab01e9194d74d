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

#include <Eigen/Core>

#include <span>
#include <vector>

#include "latentprobe/clustering.hpp"
#include "latentprobe/featureset.hpp"

namespace latentprobe {

// K x L table: entry (k, l) counts items of cluster k carrying class l.
Eigen::MatrixXd Contingency(const Clustering& pred, std::span<const Label> truth, Label class_count);

struct Matching {
  double weight = 0.0;
  // row -> matched column, or -1 when the row is matched to a padding dummy.
  std::vector<Index> row_to_col;
};

// Maximum-weight one-to-one matching between rows and columns of a
// non-negative rectangular matrix (Hungarian method with potentials).
Matching MaxWeightMatching(const Eigen::MatrixXd& weights);

// Matched count / N for the best cluster<->class matching. Clusters left
// without a class count as false positives.
double ClusterAccuracy(const Clustering& pred, std::span<const Label> truth);

// (1/N) sum_k max_l |S_k ∩ l|
double Purity(const Clustering& pred, std::span<const Label> truth);

// Share of clusters that hold exactly one item.
double SingletonFraction(const Clustering& pred);

struct DistanceStats {
  double mu_intra = 0.0;
  double sigma_intra = 0.0;
  double mu_inter = 0.0;
  double sigma_inter = 0.0;
  bool normalized = false;
};

// Mean and population standard deviation of squared pairwise distances over
// same-class and different-class pairs. With `normalize`, all four values
// are divided by the mean over all pairs.
DistanceStats ClassDistanceStats(const FeatureSet& features, bool normalize);

// (mu_intra + sigma_intra) - (mu_inter + sigma_inter); positive means overlap.
inline double OverlapDelta(const DistanceStats& s) {
  return (s.mu_intra + s.sigma_intra) - (s.mu_inter + s.sigma_inter);
}

}  // namespace latentprobe
