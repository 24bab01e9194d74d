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

#include "latentprobe/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "latentprobe/error.hpp"

namespace latentprobe {
namespace {

void CheckLengths(const Clustering& pred, std::span<const Label> truth) {
  Require(pred.size() == truth.size(), ErrorCode::kSizeMismatch,
          "clustering covers " + std::to_string(pred.size()) + " items but truth has " +
              std::to_string(truth.size()));
  Require(!truth.empty(), ErrorCode::kEmptySet, "cannot score an empty clustering");
}

Label ClassCount(std::span<const Label> truth) {
  return *std::max_element(truth.begin(), truth.end()) + 1;
}

// Minimum-cost assignment of every row to a distinct column, rows <= cols.
// Classic O(rows^2 * cols) shortest augmenting path with potentials.
std::vector<Index> MinCostAssignment(const Eigen::MatrixXd& cost) {
  const Index rows = cost.rows();
  const Index cols = cost.cols();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(rows + 1, 0.0), v(cols + 1, 0.0);
  std::vector<Index> owner(cols + 1, 0), way(cols + 1, 0);
  for (Index i = 1; i <= rows; ++i) {
    owner[0] = i;
    Index free_col = 0;
    std::vector<double> min_slack(cols + 1, inf);
    std::vector<bool> used(cols + 1, false);
    do {
      used[free_col] = true;
      const Index row = owner[free_col];
      double delta = inf;
      Index next = 0;
      for (Index j = 1; j <= cols; ++j) {
        if (used[j]) continue;
        const double slack = cost(row - 1, j - 1) - u[row] - v[j];
        if (slack < min_slack[j]) {
          min_slack[j] = slack;
          way[j] = free_col;
        }
        if (min_slack[j] < delta) {
          delta = min_slack[j];
          next = j;
        }
      }
      for (Index j = 0; j <= cols; ++j) {
        if (used[j]) {
          u[owner[j]] += delta;
          v[j] -= delta;
        } else {
          min_slack[j] -= delta;
        }
      }
      free_col = next;
    } while (owner[free_col] != 0);
    do {
      const Index prev = way[free_col];
      owner[free_col] = owner[prev];
      free_col = prev;
    } while (free_col != 0);
  }
  std::vector<Index> row_to_col(rows, -1);
  for (Index j = 1; j <= cols; ++j) {
    if (owner[j] != 0) row_to_col[owner[j] - 1] = j - 1;
  }
  return row_to_col;
}

}  // namespace

Eigen::MatrixXd Contingency(const Clustering& pred, std::span<const Label> truth, Label class_count) {
  CheckLengths(pred, truth);
  Eigen::MatrixXd table = Eigen::MatrixXd::Zero(pred.cluster_count(), class_count);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    Require(truth[i] < class_count, ErrorCode::kLabelOutOfRange, "class label out of range");
    table(pred[i], truth[i]) += 1.0;
  }
  return table;
}

Matching MaxWeightMatching(const Eigen::MatrixXd& weights) {
  Matching result;
  result.row_to_col.assign(static_cast<std::size_t>(weights.rows()), -1);
  if (weights.size() == 0) return result;
  // Padding with zero-weight dummies is implicit: the smaller side is fully
  // matched into the larger one and the leftovers meet dummies.
  const bool transpose = weights.rows() > weights.cols();
  const Eigen::MatrixXd cost = transpose ? Eigen::MatrixXd(-weights.transpose()) : Eigen::MatrixXd(-weights);
  const std::vector<Index> assignment = MinCostAssignment(cost);
  for (Index r = 0; r < static_cast<Index>(assignment.size()); ++r) {
    const Index c = assignment[r];
    if (c < 0) continue;
    const Index row = transpose ? c : r;
    const Index col = transpose ? r : c;
    result.row_to_col[row] = col;
    result.weight += weights(row, col);
  }
  return result;
}

double ClusterAccuracy(const Clustering& pred, std::span<const Label> truth) {
  CheckLengths(pred, truth);
  const Eigen::MatrixXd table = Contingency(pred, truth, ClassCount(truth));
  return MaxWeightMatching(table).weight / static_cast<double>(truth.size());
}

double Purity(const Clustering& pred, std::span<const Label> truth) {
  CheckLengths(pred, truth);
  const Eigen::MatrixXd table = Contingency(pred, truth, ClassCount(truth));
  return table.rowwise().maxCoeff().sum() / static_cast<double>(truth.size());
}

double SingletonFraction(const Clustering& pred) {
  if (pred.cluster_count() == 0) return 0.0;
  const auto sizes = pred.ClusterSizes();
  const auto singletons = std::count(sizes.begin(), sizes.end(), std::size_t{1});
  return static_cast<double>(singletons) / static_cast<double>(pred.cluster_count());
}

DistanceStats ClassDistanceStats(const FeatureSet& features, bool normalize) {
  const auto& labels = features.labels();
  std::vector<std::size_t> class_sizes(features.class_count(), 0);
  for (Label l : labels) ++class_sizes[l];
  std::size_t populated = 0;
  for (Label l = 0; l < features.class_count(); ++l) {
    if (class_sizes[l] == 0) continue;
    ++populated;
    Require(class_sizes[l] >= 2, ErrorCode::kDegenerateClass,
            "class " + std::to_string(l) + " has fewer than two samples");
  }
  Require(populated >= 2, ErrorCode::kDegenerateClass, "distance statistics need at least two classes");

  // Welford accumulators keep the variance stable for large distances.
  struct Moments {
    double count = 0.0, mean = 0.0, m2 = 0.0, sum = 0.0;
    void Add(double x) {
      count += 1.0;
      sum += x;
      const double delta = x - mean;
      mean += delta / count;
      m2 += delta * (x - mean);
    }
    double Std() const { return std::sqrt(std::max(0.0, m2 / count)); }
  };
  const Eigen::MatrixXd points = features.data().cast<double>();
  Moments intra, inter;
  for (Index i = 0; i < points.rows(); ++i) {
    for (Index j = i + 1; j < points.rows(); ++j) {
      const double d = (points.row(i) - points.row(j)).squaredNorm();
      (labels[i] == labels[j] ? intra : inter).Add(d);
    }
  }
  DistanceStats stats;
  stats.mu_intra = intra.mean;
  stats.mu_inter = inter.mean;
  stats.sigma_intra = intra.Std();
  stats.sigma_inter = inter.Std();
  if (normalize) {
    const double global_mean = (intra.sum + inter.sum) / (intra.count + inter.count);
    Require(global_mean > 0.0, ErrorCode::kDegenerateClass, "all samples coincide; cannot normalize");
    stats.mu_intra /= global_mean;
    stats.sigma_intra /= global_mean;
    stats.mu_inter /= global_mean;
    stats.sigma_inter /= global_mean;
    stats.normalized = true;
  }
  return stats;
}

}  // namespace latentprobe
