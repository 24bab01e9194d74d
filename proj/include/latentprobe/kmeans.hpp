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

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "latentprobe/clustering.hpp"
#include "latentprobe/error.hpp"
#include "latentprobe/featureset.hpp"
#include "latentprobe/random.hpp"

namespace latentprobe {

struct KmeansOptions {
  Index k = 8;
  std::uint64_t seed = 0;
  int max_iter = 300;
  double tol = 1e-4;  // on the largest squared centroid displacement
  int restarts = 1;
};

template <typename Scalar>
struct KmeansResult {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Clustering clustering;
  Matrix centroids;  // K x D
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
  // Objective after every centroid update; non-increasing.
  std::vector<double> objective_trace;
};

namespace kmeans_detail {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Derived, typename Scalar>
Index Nearest(const Eigen::MatrixBase<Derived>& points, Index i, const Matrix<Scalar>& centroids,
              double* distance) {
  Index best = 0;
  double best_distance = std::numeric_limits<double>::infinity();
  for (Index c = 0; c < centroids.rows(); ++c) {
    const double dist = (points.row(i) - centroids.row(c)).squaredNorm();
    if (dist < best_distance) {
      best_distance = dist;
      best = c;
    }
  }
  if (distance != nullptr) *distance = best_distance;
  return best;
}

// k-means++ seeding.
template <typename Derived>
Matrix<typename Derived::Scalar> SeedPlusPlus(const Eigen::MatrixBase<Derived>& points, Index k, Rng& rng) {
  using Scalar = typename Derived::Scalar;
  const Index n = points.rows();
  Matrix<Scalar> centroids(k, points.cols());
  centroids.row(0) = points.row(static_cast<Index>(rng.Below(static_cast<std::uint64_t>(n))));
  std::vector<double> closest(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    closest[static_cast<std::size_t>(i)] = (points.row(i) - centroids.row(0)).squaredNorm();
  }
  for (Index c = 1; c < k; ++c) {
    double total = 0.0;
    for (double d : closest) total += d;
    Index chosen = n - 1;
    if (total > 0.0) {
      double target = rng.Uniform() * total;
      for (Index i = 0; i < n; ++i) {
        target -= closest[static_cast<std::size_t>(i)];
        if (target < 0.0) {
          chosen = i;
          break;
        }
      }
    } else {
      chosen = static_cast<Index>(rng.Below(static_cast<std::uint64_t>(n)));
    }
    centroids.row(c) = points.row(chosen);
    for (Index i = 0; i < n; ++i) {
      const double d = (points.row(i) - centroids.row(c)).squaredNorm();
      auto& slot = closest[static_cast<std::size_t>(i)];
      if (d < slot) slot = d;
    }
  }
  return centroids;
}

template <typename Derived>
void Assign(const Eigen::MatrixBase<Derived>& points,
            const Matrix<typename Derived::Scalar>& centroids, std::vector<ClusterId>& assignment) {
  const Index k = centroids.rows();
  std::vector<double> distance(assignment.size());
  std::vector<std::size_t> sizes(static_cast<std::size_t>(k), 0);
  for (Index i = 0; i < points.rows(); ++i) {
    const auto c = Nearest(points, i, centroids, &distance[static_cast<std::size_t>(i)]);
    assignment[static_cast<std::size_t>(i)] = static_cast<ClusterId>(c);
    ++sizes[static_cast<std::size_t>(c)];
  }
  // Empty clusters take the point farthest from its centroid among clusters
  // that can spare one.
  for (Index c = 0; c < k; ++c) {
    if (sizes[static_cast<std::size_t>(c)] > 0) continue;
    std::size_t far = assignment.size();
    double far_distance = -1.0;
    for (std::size_t i = 0; i < assignment.size(); ++i) {
      if (sizes[assignment[i]] > 1 && distance[i] > far_distance) {
        far_distance = distance[i];
        far = i;
      }
    }
    --sizes[assignment[far]];
    assignment[far] = static_cast<ClusterId>(c);
    distance[far] = 0.0;
    sizes[static_cast<std::size_t>(c)] = 1;
  }
}

template <typename Derived>
Matrix<typename Derived::Scalar> Means(const Eigen::MatrixBase<Derived>& points,
                                       const std::vector<ClusterId>& assignment, Index k) {
  using Scalar = typename Derived::Scalar;
  Matrix<Scalar> sums = Matrix<Scalar>::Zero(k, points.cols());
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> counts = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(k);
  for (Index i = 0; i < points.rows(); ++i) {
    const auto c = static_cast<Index>(assignment[static_cast<std::size_t>(i)]);
    sums.row(c) += points.row(i);
    counts(c) += Scalar(1);
  }
  for (Index c = 0; c < k; ++c) sums.row(c) /= counts(c);
  return sums;
}

template <typename Derived>
double Objective(const Eigen::MatrixBase<Derived>& points, const Matrix<typename Derived::Scalar>& centroids,
                 const std::vector<ClusterId>& assignment) {
  double total = 0.0;
  for (Index i = 0; i < points.rows(); ++i) {
    total += static_cast<double>(
        (points.row(i) - centroids.row(static_cast<Index>(assignment[static_cast<std::size_t>(i)])))
            .squaredNorm());
  }
  return total;
}

template <typename Derived>
KmeansResult<typename Derived::Scalar> RunOnce(const Eigen::MatrixBase<Derived>& points,
                                               const KmeansOptions& options, std::uint64_t seed) {
  using Scalar = typename Derived::Scalar;
  Rng rng(seed);
  Matrix<Scalar> centroids = SeedPlusPlus(points, options.k, rng);
  std::vector<ClusterId> assignment(static_cast<std::size_t>(points.rows()));
  std::vector<ClusterId> previous;

  KmeansResult<Scalar> result;
  for (int iter = 0; iter < options.max_iter; ++iter) {
    Assign(points, centroids, assignment);
    Matrix<Scalar> updated = Means(points, assignment, options.k);
    const double movement = static_cast<double>((updated - centroids).rowwise().squaredNorm().maxCoeff());
    centroids = std::move(updated);
    result.iterations = iter + 1;
    result.objective_trace.push_back(Objective(points, centroids, assignment));
    if (movement < options.tol || assignment == previous) {
      result.converged = true;
      break;
    }
    previous = assignment;
  }
  result.objective = result.objective_trace.back();
  result.centroids = std::move(centroids);
  result.clustering = Clustering(std::move(assignment));
  return result;
}

}  // namespace kmeans_detail

// Lloyd's algorithm with k-means++ seeding, minimizing
// sum_k sum_{i in S_k} ||x_i - mu_k||^2 over the rows of `points`.
// With restarts > 1 the run with the lowest objective wins (first on ties).
template <typename Derived>
KmeansResult<typename Derived::Scalar> Kmeans(const Eigen::MatrixBase<Derived>& points,
                                              const KmeansOptions& options) {
  Require(options.k >= 1 && options.k <= points.rows(), ErrorCode::kInvalidArgument,
          "k must lie in [1, " + std::to_string(points.rows()) + "]");
  Require(options.max_iter >= 1, ErrorCode::kInvalidArgument, "max_iter must be at least 1");
  Require(options.restarts >= 1, ErrorCode::kInvalidArgument, "restarts must be at least 1");
  Require(options.tol >= 0.0, ErrorCode::kInvalidArgument, "tol must be non-negative");
  auto best = kmeans_detail::RunOnce(points, options, MixSeed(options.seed, 0));
  for (int r = 1; r < options.restarts; ++r) {
    auto candidate = kmeans_detail::RunOnce(points, options, MixSeed(options.seed, static_cast<std::uint64_t>(r)));
    if (candidate.objective < best.objective) best = std::move(candidate);
  }
  return best;
}

inline KmeansResult<double> Kmeans(const FeatureSet& features, const KmeansOptions& options) {
  const Eigen::MatrixXd points = features.data().cast<double>();
  return Kmeans(points, options);
}

}  // namespace latentprobe
