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
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

#include "latentprobe/error.hpp"
#include "latentprobe/featureset.hpp"

namespace latentprobe {

template <typename Scalar>
struct VarianceProfile {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Vector eigenvalues;  // descending, clamped at zero
  Vector ratios;       // eigenvalue share, sums to one
  Vector cumulative;   // running sum of ratios, last entry exactly one
  Matrix components;   // D x D, column j is the j-th principal axis
  Vector mean;         // column means used for centring
};

// PCA of the 1/(n-1) sample covariance. Each component is signed so its
// largest-magnitude coordinate is positive.
template <typename Derived>
VarianceProfile<typename Derived::Scalar> PcaProfile(const Eigen::MatrixBase<Derived>& points) {
  using Scalar = typename Derived::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Require(points.rows() >= 2, ErrorCode::kInvalidArgument, "PCA needs at least two samples");

  VarianceProfile<Scalar> profile;
  profile.mean = points.colwise().mean().transpose();
  const Matrix centred = points.rowwise() - profile.mean.transpose();
  const Matrix covariance = (centred.transpose() * centred) / Scalar(points.rows() - 1);

  Eigen::SelfAdjointEigenSolver<Matrix> solver(covariance);
  Require(solver.info() == Eigen::Success, ErrorCode::kNonFinite, "covariance eigen-solve failed");
  const Eigen::Index d = covariance.rows();
  profile.eigenvalues = solver.eigenvalues().reverse().cwiseMax(Scalar(0));
  profile.components = solver.eigenvectors().rowwise().reverse();
  for (Eigen::Index j = 0; j < d; ++j) {
    Eigen::Index pivot;
    profile.components.col(j).cwiseAbs().maxCoeff(&pivot);
    if (profile.components(pivot, j) < Scalar(0)) profile.components.col(j) *= Scalar(-1);
  }

  const Scalar total = profile.eigenvalues.sum();
  if (total > Scalar(0)) {
    profile.ratios = profile.eigenvalues / total;
  } else {
    // No variance at all: attribute everything to the first axis.
    profile.ratios = VarianceProfile<Scalar>::Vector::Zero(d);
    profile.ratios(0) = Scalar(1);
  }
  profile.cumulative.resize(d);
  Scalar running(0);
  for (Eigen::Index j = 0; j < d; ++j) {
    running += profile.ratios(j);
    profile.cumulative(j) = std::min(running, Scalar(1));
  }
  profile.cumulative(d - 1) = Scalar(1);
  return profile;
}

inline VarianceProfile<double> PcaProfile(const FeatureSet& features) {
  const Eigen::MatrixXd points = features.data().cast<double>();
  return PcaProfile(points);
}

// Cumulative ratios within this slack of the threshold count as reaching it.
inline constexpr double kRatioSlack = 1e-9;

// Smallest m with cumulative[m-1] >= threshold.
template <typename Scalar>
Eigen::Index ComponentsForRatio(const VarianceProfile<Scalar>& profile, double threshold) {
  Require(threshold > 0.0 && threshold <= 1.0, ErrorCode::kInvalidArgument, "threshold must lie in (0, 1]");
  for (Eigen::Index m = 0; m < profile.cumulative.size(); ++m) {
    if (static_cast<double>(profile.cumulative(m)) >= threshold - kRatioSlack) return m + 1;
  }
  return profile.cumulative.size();
}

// Centred rows projected onto the top-m principal axes (n x m).
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> Project(
    const Eigen::MatrixBase<Derived>& points, const VarianceProfile<typename Derived::Scalar>& profile,
    Eigen::Index m) {
  Require(m >= 1 && m <= profile.components.cols(), ErrorCode::kInvalidArgument,
          "component count must lie in [1, d]");
  return (points.rowwise() - profile.mean.transpose()) * profile.components.leftCols(m);
}

// Reduced feature set with the same labels.
FeatureSet Reduce(const FeatureSet& features, Index m);

}  // namespace latentprobe
