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

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "latentprobe/clustering.hpp"
#include "latentprobe/error.hpp"
#include "latentprobe/featureset.hpp"

namespace latentprobe {

// Complete graph over n nodes with one real cost per unordered pair, stored
// densely in upper-triangular row order.
class CostGraph {
 public:
  explicit CostGraph(Index n, double theta = 0.0, double temperature = 1.0);
  CostGraph(Index n, std::vector<double> costs, double theta = 0.0, double temperature = 1.0);

  Index node_count() const { return n_; }
  std::size_t edge_count() const { return costs_.size(); }
  double theta() const { return theta_; }
  double temperature() const { return temperature_; }

  // i != j, either order.
  std::size_t EdgeIndex(Index i, Index j) const {
    if (i > j) std::swap(i, j);
    return static_cast<std::size_t>(i * (2 * n_ - i - 1) / 2 + (j - i - 1));
  }
  double cost(Index i, Index j) const { return i == j ? 0.0 : costs_[EdgeIndex(i, j)]; }
  void set_cost(Index i, Index j, double w) { costs_[EdgeIndex(i, j)] = w; }
  std::span<const double> costs() const { return costs_; }

 private:
  Index n_;
  std::vector<double> costs_;
  double theta_;
  double temperature_;
};

inline double Logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }
inline double Logit(double p) { return std::log(p / (1.0 - p)); }

// Cut probability of a pair at squared distance d.
inline double CutProbability(double d, double theta, double temperature) {
  return Logistic((d - theta) / temperature);
}

// logit(1 - p_cut(d)) in closed form: attractive (positive) below theta.
inline double EdgeCost(double distance, double theta, double temperature) {
  return (theta - distance) / temperature;
}

template <typename Derived>
CostGraph BuildCostGraph(const Eigen::MatrixBase<Derived>& points, double theta, double temperature) {
  Require(theta > 0.0 && std::isfinite(theta), ErrorCode::kInvalidArgument, "theta must be positive");
  Require(temperature > 0.0 && std::isfinite(temperature), ErrorCode::kInvalidArgument,
          "temperature must be positive");
  const Index n = points.rows();
  std::vector<double> costs;
  costs.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const double d = (points.row(i).template cast<double>() - points.row(j).template cast<double>()).squaredNorm();
      Require(std::isfinite(d), ErrorCode::kNonFinite, "non-finite pairwise distance");
      costs.push_back(EdgeCost(d, theta, temperature));
    }
  }
  return CostGraph(n, std::move(costs), theta, temperature);
}

inline CostGraph BuildCostGraph(const FeatureSet& features, double theta, double temperature) {
  return BuildCostGraph(features.data(), theta, temperature);
}

// Standard deviation of squared distances over a seeded sample of at most
// `max_pairs` pairs (all pairs when fewer exist). Falls back to 1 when the
// sample has no spread.
double DefaultTemperature(const FeatureSet& features, std::uint64_t seed, std::size_t max_pairs = 20000);

// y_e per edge, 1 = cut.
using EdgeLabeling = std::vector<std::uint8_t>;

EdgeLabeling InducedLabeling(const CostGraph& graph, const Clustering& clustering);

// sum of w_e over edges whose endpoints lie in different clusters.
double MulticutObjective(const CostGraph& graph, const Clustering& clustering);
double MulticutObjective(const CostGraph& graph, const EdgeLabeling& labeling);

// True iff no cut edge joins two nodes of the same join-component, i.e. the
// labeling satisfies every cycle inequality of the complete graph.
bool IsValidDecomposition(const CostGraph& graph, const EdgeLabeling& labeling);

// Greedy additive edge contraction from singletons.
Clustering SolveGaec(const CostGraph& graph);

// Kernighan-Lin style refinement: each pass builds a sequence of tentative
// single-node moves (to another cluster or to a fresh singleton) and keeps
// the prefix with the most negative cumulative objective change.
Clustering RefineKl(const CostGraph& graph, const Clustering& start, int max_passes = 10);

inline Clustering SolveMulticut(const CostGraph& graph, int kl_passes = 10) {
  return RefineKl(graph, SolveGaec(graph), kl_passes);
}

struct SweepRow {
  double theta = 0.0;
  double accuracy = 0.0;
  double purity = 0.0;
  std::size_t cluster_count = 0;
  std::size_t singleton_count = 0;
};

struct SweepResult {
  double best_theta = 0.0;
  std::vector<SweepRow> rows;
};

// Solves GAEC+KL for every threshold of a strictly increasing grid and
// selects the one with the highest cluster accuracy (smallest on ties).
SweepResult ThresholdSweep(const FeatureSet& features, std::span<const double> grid, double temperature,
                           int kl_passes = 10);

// Parses "a:b:step" into a, a+step, ... <= b (inclusive up to rounding).
std::vector<double> ParseGrid(const std::string& spec);

struct ParallelOptions {
  Index chunks = 1;
  double theta = 1.0;
  double temperature = 1.0;
  std::uint64_t seed = 0;
  int jobs = 1;
  int kl_passes = 10;
};

// Disjoint chunks are solved independently, each chunk cluster is replaced
// by its centroid, and a second multicut over the centroids (same theta and
// temperature) merges them. chunks == 1 is the direct solve.
Clustering ClusterParallel(const FeatureSet& features, const ParallelOptions& options);

}  // namespace latentprobe
