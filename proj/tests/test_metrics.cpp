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

#include "doctest.h"
#include "latentprobe/error.hpp"
#include "latentprobe/metrics.hpp"
#include "latentprobe/random.hpp"
#include "latentprobe/synth.hpp"
#include "oracles.hpp"

using namespace latentprobe;

namespace {

std::vector<std::vector<double>> ToTable(const Eigen::MatrixXd& m) {
  std::vector<std::vector<double>> table(static_cast<std::size_t>(m.rows()));
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) table[static_cast<std::size_t>(r)].push_back(m(r, c));
  }
  return table;
}

Clustering RandomClustering(Rng& rng, std::size_t n, std::uint64_t max_k) {
  std::vector<std::uint64_t> raw(n);
  for (auto& v : raw) v = rng.Below(max_k);
  return Clustering::Canonical(raw);
}

}  // namespace

TEST_CASE("perfect clustering scores one") {
  const std::vector<Label> truth = {0, 0, 1, 1, 2, 2};
  const Clustering pred({2, 2, 0, 0, 1, 1});
  CHECK(ClusterAccuracy(pred, truth) == 1.0);
  CHECK(Purity(pred, truth) == 1.0);
}

TEST_CASE("false-positive cluster: accuracy 5/7, purity 6/7") {
  // Clusters {L1,L1,L2}, {L2,L2}, {L3}, {L3}.
  const Clustering pred({0, 0, 0, 1, 1, 2, 3});
  const std::vector<Label> truth = {0, 0, 1, 1, 1, 2, 2};
  const double brute = oracle::BestInjectiveMatching(ToTable(Contingency(pred, truth, 3)));
  CHECK(brute == 5.0);
  CHECK(ClusterAccuracy(pred, truth) == doctest::Approx(5.0 / 7.0));
  CHECK(Purity(pred, truth) == doctest::Approx(6.0 / 7.0));
}

TEST_CASE("one cluster over balanced classes") {
  const std::vector<Label> truth = {0, 1, 2, 3, 0, 1, 2, 3};
  const Clustering pred = Clustering::OneCluster(8);
  CHECK(ClusterAccuracy(pred, truth) == doctest::Approx(0.25));
  CHECK(Purity(pred, truth) == doctest::Approx(0.25));
}

TEST_CASE("purity by hand and the singleton limit") {
  const std::vector<Label> truth = {0, 0, 1, 1, 1, 0};
  CHECK(Purity(Clustering({0, 0, 0, 1, 1, 1}), truth) == doctest::Approx(2.0 / 3.0));
  CHECK(Purity(Clustering::Singletons(6), truth) == 1.0);
}

TEST_CASE("singleton fraction") {
  CHECK(SingletonFraction(Clustering::Singletons(5)) == 1.0);
  CHECK(SingletonFraction(Clustering::OneCluster(4)) == 0.0);
  CHECK(SingletonFraction(Clustering({0, 1, 2, 2, 2})) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("length mismatch") {
  const std::vector<Label> truth = {0, 1};
  CHECK_THROWS_AS(ClusterAccuracy(Clustering::OneCluster(3), truth), Error);
  CHECK_THROWS_AS(Purity(Clustering::OneCluster(3), truth), Error);
}

TEST_CASE("Hungarian matches brute force on random contingency tables") {
  Rng rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const Index k = 1 + static_cast<Index>(rng.Below(6));
    const Index l = 1 + static_cast<Index>(rng.Below(6));
    Eigen::MatrixXd table(k, l);
    for (Index r = 0; r < k; ++r) {
      for (Index c = 0; c < l; ++c) table(r, c) = static_cast<double>(rng.Below(10));
    }
    const Matching matching = MaxWeightMatching(table);
    CHECK(matching.weight == oracle::BestInjectiveMatching(ToTable(table)));
    std::vector<bool> used(static_cast<std::size_t>(l), false);
    double total = 0.0;
    for (Index r = 0; r < k; ++r) {
      const Index c = matching.row_to_col[static_cast<std::size_t>(r)];
      if (c < 0) continue;
      CHECK_FALSE(used[static_cast<std::size_t>(c)]);
      used[static_cast<std::size_t>(c)] = true;
      total += table(r, c);
    }
    CHECK(total == matching.weight);
  }
}

TEST_CASE("purity dominates accuracy; both ignore id permutations") {
  Rng rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 5 + rng.Below(40);
    std::vector<Label> truth(n);
    for (auto& t : truth) t = static_cast<Label>(rng.Below(5));
    const Clustering pred = RandomClustering(rng, n, 1 + rng.Below(10));
    const double acc = ClusterAccuracy(pred, truth);
    const double pur = Purity(pred, truth);
    CHECK(pur >= acc);

    // Relabel clusters and classes by fixed permutations.
    std::vector<ClusterId> shuffled_ids(pred.cluster_count());
    for (ClusterId c = 0; c < pred.cluster_count(); ++c) shuffled_ids[c] = pred.cluster_count() - 1 - c;
    std::vector<ClusterId> permuted(n);
    for (std::size_t i = 0; i < n; ++i) permuted[i] = shuffled_ids[pred[i]];
    std::vector<Label> relabeled(n);
    for (std::size_t i = 0; i < n; ++i) relabeled[i] = (truth[i] + 3) % 5;
    const Clustering p2(permuted);
    CHECK(ClusterAccuracy(p2, relabeled) == doctest::Approx(acc));
    CHECK(Purity(p2, relabeled) == doctest::Approx(pur));

    bool pure = true;
    const auto table = Contingency(pred, truth, 5);
    for (Index r = 0; r < table.rows(); ++r) pure = pure && (table.row(r).array() > 0).count() == 1;
    CHECK((pur == 1.0) == pure);
  }
}

TEST_CASE("class distance statistics by hand") {
  FeatureMatrix data(4, 1);
  data << 0, 2, 10, 12;
  const FeatureSet fs(data, {0, 0, 1, 1}, 2);
  const DistanceStats raw = ClassDistanceStats(fs, false);
  CHECK(raw.mu_intra == doctest::Approx(4.0));
  CHECK(raw.sigma_intra == doctest::Approx(0.0));
  CHECK(raw.mu_inter == doctest::Approx(102.0));  // {100, 144, 64, 100}
  CHECK(raw.sigma_inter == doctest::Approx(std::sqrt((4.0 + 42.0 * 42.0 + 38.0 * 38.0 + 4.0) / 4.0)));

  const DistanceStats scaled = ClassDistanceStats(fs, true);
  const double global = (4.0 * 2 + 100 + 144 + 64 + 100) / 6.0;
  CHECK(scaled.normalized);
  CHECK(std::abs(scaled.mu_intra - raw.mu_intra / global) < 1e-9);
  CHECK(std::abs(scaled.mu_inter - raw.mu_inter / global) < 1e-9);
  CHECK(std::abs(scaled.sigma_inter - raw.sigma_inter / global) < 1e-9);
}

TEST_CASE("classes drawn from one distribution have matching intra and inter means") {
  // Identical copies would add zero-distance inter pairs; independent draws
  // from the same cloud are the meaningful version of "superimposed".
  const FeatureSet fs = GenerateMixture({2, 8, 300, 0.0, 1.0, 17});
  const auto raw = ClassDistanceStats(fs, false);
  CHECK(std::abs(raw.mu_intra - raw.mu_inter) / raw.mu_inter < 0.02);
  CHECK(std::abs(OverlapDelta(raw)) / raw.mu_inter < 0.05);
}

TEST_CASE("degenerate classes are rejected") {
  FeatureMatrix data(3, 1);
  data << 0, 1, 2;
  CHECK_THROWS_AS(ClassDistanceStats(FeatureSet(data, {0, 0, 1}, 2), false), Error);
  CHECK_THROWS_AS(ClassDistanceStats(FeatureSet(data, {0, 0, 0}, 1), false), Error);
}

TEST_CASE("overlap delta") {
  CHECK(OverlapDelta({1.0, 0.5, 2.0, 0.3, false}) == doctest::Approx(-0.8));
  CHECK(OverlapDelta({1.0, 0.5, 1.0, 0.5, false}) == 0.0);
}
