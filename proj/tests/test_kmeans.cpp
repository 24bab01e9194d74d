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

#include <cmath>
#include <limits>

#include "doctest.h"
#include "latentprobe/error.hpp"
#include "latentprobe/kmeans.hpp"
#include "latentprobe/metrics.hpp"
#include "latentprobe/synth.hpp"
#include "oracles.hpp"

using namespace latentprobe;

namespace {

FeatureSet Line(std::initializer_list<float> xs) {
  FeatureMatrix data(static_cast<Index>(xs.size()), 1);
  Index i = 0;
  for (float x : xs) data(i++, 0) = x;
  return FeatureSet(data, std::vector<Label>(xs.size(), 0), 1);
}

double RecomputedObjective(const FeatureSet& fs, const KmeansResult<double>& r) {
  double total = 0.0;
  for (Index i = 0; i < fs.size(); ++i) {
    total += (fs.row(i).cast<double>() - r.centroids.row(r.clustering[static_cast<std::size_t>(i)])).squaredNorm();
  }
  return total;
}

}  // namespace

TEST_CASE("k = 1 gives the column mean") {
  const FeatureSet fs = GenerateMixture({3, 4, 10, 2.0, 1.0, 5});
  KmeansOptions options;
  options.k = 1;
  const auto r = Kmeans(fs, options);
  const Eigen::MatrixXd points = fs.data().cast<double>();
  const Eigen::RowVectorXd mean = points.colwise().mean();
  CHECK((r.centroids.row(0) - mean).norm() < 1e-9);
  const double scatter = (points.rowwise() - mean).squaredNorm();
  CHECK(r.objective == doctest::Approx(scatter).epsilon(1e-9));
  CHECK(r.clustering.cluster_count() == 1);
}

TEST_CASE("exact fit on two points") {
  KmeansOptions options;
  options.k = 2;
  const auto r = Kmeans(Line({0.0f, 10.0f}), options);
  CHECK(r.objective == 0.0);
  CHECK(r.clustering[0] != r.clustering[1]);
}

TEST_CASE("1-D {0,1,9,10} with k = 2 matches the enumerated optimum") {
  const FeatureSet fs = Line({0.0f, 1.0f, 9.0f, 10.0f});
  const std::vector<double> xs = {0, 1, 9, 10};
  // Enumerate every split into two non-empty groups.
  double best = std::numeric_limits<double>::infinity();
  for (int mask = 1; mask < 15; ++mask) {
    double sum[2] = {0, 0}, count[2] = {0, 0};
    for (int i = 0; i < 4; ++i) {
      sum[(mask >> i) & 1] += xs[i];
      count[(mask >> i) & 1] += 1;
    }
    double cost = 0.0;
    for (int i = 0; i < 4; ++i) {
      const int g = (mask >> i) & 1;
      cost += std::pow(xs[i] - sum[g] / count[g], 2);
    }
    best = std::min(best, cost);
  }
  CHECK(best == 1.0);

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    KmeansOptions options;
    options.k = 2;
    options.seed = seed;
    const auto r = Kmeans(fs, options);
    CHECK(r.objective == doctest::Approx(best));
    CHECK(r.clustering[0] == r.clustering[1]);
    CHECK(r.clustering[2] == r.clustering[3]);
    CHECK(r.clustering[0] != r.clustering[2]);
    const double lo = std::min(r.centroids(0, 0), r.centroids(1, 0));
    const double hi = std::max(r.centroids(0, 0), r.centroids(1, 0));
    CHECK(lo == doctest::Approx(0.5));
    CHECK(hi == doctest::Approx(9.5));
  }
}

TEST_CASE("objective trace is non-increasing and the result is a fixed point") {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const FeatureSet fs = GenerateMixture({6, 5, 25, 1.5, 1.0, seed});
    KmeansOptions options;
    options.k = 6 + static_cast<Index>(seed % 5);
    options.seed = seed;
    options.tol = 0.0;
    const auto r = Kmeans(fs, options);
    for (std::size_t t = 1; t < r.objective_trace.size(); ++t) {
      CHECK(r.objective_trace[t] <= r.objective_trace[t - 1] * (1 + 1e-12));
    }
    CHECK(r.converged);
    CHECK(r.clustering.cluster_count() == static_cast<ClusterId>(options.k));
    CHECK(std::abs(RecomputedObjective(fs, r) - r.objective) <= 1e-6 * r.objective);
    for (Index i = 0; i < fs.size(); ++i) {
      double nearest = std::numeric_limits<double>::infinity();
      Index arg = 0;
      for (Index c = 0; c < r.centroids.rows(); ++c) {
        const double d = (fs.row(i).cast<double>() - r.centroids.row(c)).squaredNorm();
        if (d < nearest) {
          nearest = d;
          arg = c;
        }
      }
      CHECK(static_cast<ClusterId>(arg) == r.clustering[static_cast<std::size_t>(i)]);
    }
  }
}

TEST_CASE("empty clusters are repaired so k stays fixed") {
  // Heavy duplication forces k-means++ to fall back on repeated points.
  FeatureMatrix data(8, 1);
  data << 0, 0, 0, 0, 0, 0, 5, 5;
  const FeatureSet fs(data, std::vector<Label>(8, 0), 1);
  KmeansOptions options;
  options.k = 5;
  const auto r = Kmeans(fs, options);
  CHECK(r.clustering.cluster_count() == 5);
  const auto sizes = r.clustering.ClusterSizes();
  for (auto s : sizes) CHECK(s >= 1);
}

TEST_CASE("deterministic for a seed, invariant under translation") {
  const FeatureSet fs = GenerateMixture({4, 3, 30, 3.0, 1.0, 9});
  KmeansOptions options;
  options.k = 4;
  options.seed = 77;
  const auto a = Kmeans(fs, options);
  const auto b = Kmeans(fs, options);
  CHECK(a.clustering == b.clustering);
  CHECK(a.objective == b.objective);

  // Integer coordinates keep the shifted copy exact in float.
  FeatureMatrix ints = fs.data().array().round();
  const FeatureSet base(ints, fs.labels(), fs.class_count());
  FeatureMatrix moved = ints.array() + 64.0f;
  const FeatureSet shifted(moved, fs.labels(), fs.class_count());
  CHECK(Kmeans(base, options).clustering == Kmeans(shifted, options).clustering);
}

TEST_CASE("restarts never worsen the objective") {
  const FeatureSet fs = GenerateMixture({5, 4, 15, 1.0, 1.0, 2});
  KmeansOptions options;
  options.k = 8;
  options.seed = 4;
  const double single = Kmeans(fs, options).objective;
  options.restarts = 5;
  CHECK(Kmeans(fs, options).objective <= single);
}

TEST_CASE("argument errors") {
  const FeatureSet fs = Line({0.0f, 1.0f});
  KmeansOptions options;
  options.k = 3;
  CHECK_THROWS_AS(Kmeans(fs, options), Error);
  options.k = 0;
  CHECK_THROWS_AS(Kmeans(fs, options), Error);
  options.k = 1;
  options.max_iter = 0;
  CHECK_THROWS_AS(Kmeans(fs, options), Error);
}

TEST_CASE("well separated mixture is recovered exactly") {
  const FeatureSet fs = GenerateMixture({2, 2, 50, 20.0, 1.0, 1});
  KmeansOptions options;
  options.k = 2;
  const auto r = Kmeans(fs, options);
  CHECK(ClusterAccuracy(r.clustering, fs.labels()) == 1.0);
}

TEST_CASE("float and double inputs agree") {
  const FeatureSet fs = GenerateMixture({3, 3, 20, 4.0, 1.0, 3});
  KmeansOptions options;
  options.k = 3;
  const Eigen::MatrixXf as_float = fs.data();
  const auto f = Kmeans(as_float, options);
  const auto d = Kmeans(fs, options);
  CHECK(f.clustering == d.clustering);
}
