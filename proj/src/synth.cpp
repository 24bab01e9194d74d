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

#include "latentprobe/synth.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <string>

#include "latentprobe/error.hpp"
#include "latentprobe/random.hpp"

namespace latentprobe {

Eigen::MatrixXd SimplexMeans(Label class_count, Index dim, double edge_length) {
  const auto L = static_cast<Index>(class_count);
  Require(L >= 2, ErrorCode::kInvalidArgument, "mixture needs at least two classes");
  Require(dim >= L - 1, ErrorCode::kInvalidArgument,
          "dim must be >= class_count - 1 to place equidistant class means");
  // Scaled basis vectors e_k * a / sqrt(2) are mutually at distance a;
  // centring puts them in an (L-1)-dimensional subspace.
  Eigen::MatrixXd vertices = Eigen::MatrixXd::Identity(L, L) * (edge_length / std::sqrt(2.0));
  vertices.rowwise() -= vertices.colwise().mean();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(vertices.transpose());
  const Eigen::MatrixXd basis = Eigen::MatrixXd(qr.householderQ()).leftCols(L - 1);
  Eigen::MatrixXd means = Eigen::MatrixXd::Zero(L, dim);
  means.leftCols(L - 1) = vertices * basis;
  return means;
}

FeatureSet GenerateMixture(const MixtureSpec& spec) {
  Require(spec.per_class >= 1, ErrorCode::kInvalidArgument, "per_class must be at least 1");
  Require(spec.separation >= 0.0, ErrorCode::kInvalidArgument, "separation must be non-negative");
  Require(spec.noise_std > 0.0, ErrorCode::kInvalidArgument, "noise_std must be positive");
  const Eigen::MatrixXd means = SimplexMeans(spec.class_count, spec.dim, spec.separation * spec.noise_std);
  const Index n = static_cast<Index>(spec.class_count) * spec.per_class;
  FeatureMatrix data(n, spec.dim);
  std::vector<Label> labels(static_cast<std::size_t>(n));
  Rng rng(spec.seed);
  Index row = 0;
  for (Label k = 0; k < spec.class_count; ++k) {
    for (Index i = 0; i < spec.per_class; ++i, ++row) {
      for (Index j = 0; j < spec.dim; ++j) {
        data(row, j) = static_cast<float>(means(k, j) + spec.noise_std * rng.Normal());
      }
      labels[static_cast<std::size_t>(row)] = k;
    }
  }
  return FeatureSet(std::move(data), std::move(labels), spec.class_count);
}

Eigen::VectorXd DriftDirection(Index dim, std::uint64_t drift_seed) {
  Rng rng(MixSeed(drift_seed, 0));
  Eigen::VectorXd v(dim);
  do {
    for (Index j = 0; j < dim; ++j) v(j) = rng.Normal();
  } while (v.norm() == 0.0);
  return v.normalized();
}

FeatureSet Corrupt(const FeatureSet& features, const CorruptionSpec& spec, int severity) {
  Require(!spec.severities.empty(), ErrorCode::kInvalidArgument, "corruption needs at least one severity");
  Require(std::adjacent_find(spec.severities.begin(), spec.severities.end(), std::greater_equal<>()) ==
              spec.severities.end(),
          ErrorCode::kInvalidArgument, "severities must be strictly increasing");
  Require(std::find(spec.severities.begin(), spec.severities.end(), severity) != spec.severities.end(),
          ErrorCode::kInvalidArgument, "unknown severity " + std::to_string(severity));
  const double s = severity;
  const Eigen::VectorXd shift = DriftDirection(features.dim(), spec.drift_seed) * (s * spec.drift_scale);
  const double sigma = s * spec.noise_growth;
  Rng rng(MixSeed(spec.drift_seed, 1));
  FeatureMatrix data = features.data();
  for (Index i = 0; i < data.rows(); ++i) {
    for (Index j = 0; j < data.cols(); ++j) {
      double value = static_cast<double>(data(i, j)) + shift(j);
      if (sigma > 0.0) value += sigma * rng.Normal();
      data(i, j) = static_cast<float>(value);
    }
  }
  return FeatureSet(std::move(data), features.labels(), features.class_count());
}

}  // namespace latentprobe
