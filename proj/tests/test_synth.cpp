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
#include "latentprobe/kmeans.hpp"
#include "latentprobe/metrics.hpp"
#include "latentprobe/synth.hpp"

using namespace latentprobe;

TEST_CASE("mixture shape and determinism") {
  const MixtureSpec spec{3, 4, 10, 2.0, 1.0, 5};
  const FeatureSet a = GenerateMixture(spec);
  CHECK(a.size() == 30);
  CHECK(a.dim() == 4);
  CHECK(a.class_count() == 3);
  for (Index i = 0; i < a.size(); ++i) CHECK(a.labels()[static_cast<std::size_t>(i)] == i / 10);
  CHECK(GenerateMixture(spec) == a);
  MixtureSpec other = spec;
  other.seed = 6;
  CHECK_FALSE(GenerateMixture(other) == a);
}

TEST_CASE("mixture argument checks") {
  CHECK_THROWS_AS(GenerateMixture({1, 4, 10, 2.0, 1.0, 0}), Error);
  CHECK_THROWS_AS(GenerateMixture({3, 4, 0, 2.0, 1.0, 0}), Error);
  CHECK_THROWS_AS(GenerateMixture({3, 4, 10, -1.0, 1.0, 0}), Error);
  CHECK_THROWS_AS(GenerateMixture({3, 4, 10, 2.0, 0.0, 0}), Error);
  CHECK_THROWS_AS(GenerateMixture({5, 3, 10, 2.0, 1.0, 0}), Error);
}

TEST_CASE("simplex means are equidistant") {
  for (Label classes : {2u, 3u, 5u, 8u}) {
    const Eigen::MatrixXd means = SimplexMeans(classes, 9, 3.5);
    for (Index i = 0; i < means.rows(); ++i) {
      for (Index j = i + 1; j < means.rows(); ++j) {
        CHECK((means.row(i) - means.row(j)).norm() == doctest::Approx(3.5));
      }
    }
  }
}

TEST_CASE("far-apart mixture is recovered by k-means") {
  const FeatureSet fs = GenerateMixture({2, 2, 50, 20.0, 1.0, 4});
  KmeansOptions options;
  options.k = 2;
  CHECK(ClusterAccuracy(Kmeans(fs, options).clustering, fs.labels()) == 1.0);
}

TEST_CASE("coincident means leave k-means near chance") {
  double total = 0.0;
  const int runs = 10;
  for (int seed = 0; seed < runs; ++seed) {
    const FeatureSet fs = GenerateMixture({4, 4, 50, 0.0, 1.0, static_cast<std::uint64_t>(seed)});
    KmeansOptions options;
    options.k = 4;
    options.seed = static_cast<std::uint64_t>(seed);
    total += ClusterAccuracy(Kmeans(fs, options).clustering, fs.labels());
  }
  // Hungarian matching on random labels sits slightly above 1/L.
  CHECK(total / runs == doctest::Approx(0.25).epsilon(0.4));
}

TEST_CASE("identity corruption") {
  const FeatureSet fs = GenerateMixture({3, 4, 10, 2.0, 1.0, 5});
  CorruptionSpec spec;
  spec.drift_scale = 0.0;
  spec.noise_growth = 0.0;
  for (int s : spec.severities) CHECK(Corrupt(fs, spec, s) == fs);
}

TEST_CASE("drift alone is a rigid translation") {
  const FeatureSet fs = GenerateMixture({3, 6, 20, 6.0, 1.0, 2});
  CorruptionSpec spec;
  spec.noise_growth = 0.0;
  spec.drift_scale = 1.5;
  const FeatureSet moved = Corrupt(fs, spec, 3);
  const Eigen::VectorXd v = DriftDirection(fs.dim(), spec.drift_seed);
  CHECK(v.norm() == doctest::Approx(1.0));
  CHECK((moved.data().row(0).cast<double>() - fs.data().row(0).cast<double>()).transpose().isApprox(4.5 * v, 1e-5));
  for (Index i = 0; i < fs.size(); i += 3) {
    for (Index j = 0; j < fs.size(); j += 5) {
      CHECK(PairwiseDistance(moved, i, j) == doctest::Approx(PairwiseDistance(fs, i, j)).epsilon(1e-5).scale(1.0));
    }
  }
  KmeansOptions options;
  options.k = 3;
  options.seed = 8;
  CHECK(Kmeans(moved, options).clustering == Kmeans(fs, options).clustering);
}

TEST_CASE("corruption is deterministic and validates severities") {
  const FeatureSet fs = GenerateMixture({2, 3, 10, 3.0, 1.0, 1});
  CorruptionSpec spec;
  CHECK(Corrupt(fs, spec, 2) == Corrupt(fs, spec, 2));
  CHECK_FALSE(Corrupt(fs, spec, 2) == Corrupt(fs, spec, 3));
  CHECK(std::equal(fs.labels().begin(), fs.labels().end(), Corrupt(fs, spec, 5).labels().begin()));
  CHECK_THROWS_AS(Corrupt(fs, spec, 6), Error);
  CHECK_THROWS_AS(Corrupt(fs, spec, 0), Error);
  spec.severities = {1, 3, 2};
  CHECK_THROWS_AS(Corrupt(fs, spec, 1), Error);
  spec.severities = {};
  CHECK_THROWS_AS(Corrupt(fs, spec, 1), Error);
}

TEST_CASE("noise raises intra-class distance and normalized overlap") {
  int monotone_seeds = 0;
  const int seeds = 10;
  for (int seed = 0; seed < seeds; ++seed) {
    const FeatureSet fs = GenerateMixture({4, 16, 30, 4.0, 1.0, static_cast<std::uint64_t>(seed)});
    CorruptionSpec spec;
    spec.drift_seed = static_cast<std::uint64_t>(seed);
    double last_mu = ClassDistanceStats(fs, false).mu_intra;
    double last_delta = OverlapDelta(ClassDistanceStats(fs, true));
    bool monotone = true;
    for (int s : spec.severities) {
      const FeatureSet corrupted = Corrupt(fs, spec, s);
      const double mu = ClassDistanceStats(corrupted, false).mu_intra;
      const double delta = OverlapDelta(ClassDistanceStats(corrupted, true));
      CHECK(mu > last_mu);
      monotone = monotone && delta >= last_delta;
      last_mu = mu;
      last_delta = delta;
    }
    monotone_seeds += monotone;
  }
  CHECK(monotone_seeds >= 9);
}
