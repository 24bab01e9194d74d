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

#include "latentprobe/spectra.hpp"

namespace latentprobe {

FeatureSet Reduce(const FeatureSet& features, Index m) {
  Require(m >= 1 && m <= features.dim(), ErrorCode::kInvalidArgument, "component count must lie in [1, d]");
  const Eigen::MatrixXd points = features.data().cast<double>();
  const auto profile = PcaProfile(points);
  FeatureMatrix reduced = Project(points, profile, m).cast<float>();
  return FeatureSet(std::move(reduced), features.labels(), features.class_count());
}

}  // namespace latentprobe
