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
#include <vector>

#include "latentprobe/featureset.hpp"

namespace latentprobe {

struct MixtureSpec {
  Label class_count = 2;
  Index dim = 2;
  Index per_class = 50;
  double separation = 4.0;  // mean-to-mean distance in units of noise_std
  double noise_std = 1.0;
  std::uint64_t seed = 0;
};

// Class means on a regular simplex with edge length separation * noise_std,
// isotropic Gaussian noise around each. Rows are grouped by class. Requires
// dim >= class_count - 1 so the means can be mutually equidistant.
FeatureSet GenerateMixture(const MixtureSpec& spec);

// L x dim matrix of the class means used by GenerateMixture.
Eigen::MatrixXd SimplexMeans(Label class_count, Index dim, double edge_length);

// Latent-space stand-in for an image corruption: at severity s every row
// moves by s * drift_scale along one fixed unit direction and gains
// N(0, (s * noise_growth)^2) noise per coordinate. The noise field is drawn
// once per drift_seed and scaled by s, so severities differ only in scale.
struct CorruptionSpec {
  std::vector<int> severities = {1, 2, 3, 4, 5};
  double drift_scale = 0.3;
  double noise_growth = 0.3;
  std::uint64_t drift_seed = 0;
};

FeatureSet Corrupt(const FeatureSet& features, const CorruptionSpec& spec, int severity);

// Unit drift direction for a given dimension and seed.
Eigen::VectorXd DriftDirection(Index dim, std::uint64_t drift_seed);

}  // namespace latentprobe
