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
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

namespace latentprobe {

using Index = Eigen::Index;

// Row-major float storage mirrors the on-disk container exactly, so a
// save/load cycle is the identity.
using FeatureMatrix = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Label = std::uint32_t;

// N labeled samples of a D-dimensional latent space. Immutable once built.
class FeatureSet {
 public:
  // Validates: n >= 1, d >= 1, all values finite, labels.size() == n and
  // every label < class_count.
  FeatureSet(FeatureMatrix data, std::vector<Label> labels, Label class_count);

  Index size() const { return data_.rows(); }
  Index dim() const { return data_.cols(); }
  Label class_count() const { return class_count_; }

  const FeatureMatrix& data() const { return data_; }
  const std::vector<Label>& labels() const { return labels_; }
  auto row(Index i) const { return data_.row(i); }

  // Copies the selected rows (labels and class count carried along).
  FeatureSet Subset(std::span<const Index> rows) const;

  friend bool operator==(const FeatureSet& a, const FeatureSet& b) {
    return a.class_count_ == b.class_count_ && a.labels_ == b.labels_ &&
           a.data_.rows() == b.data_.rows() && a.data_.cols() == b.data_.cols() &&
           a.data_ == b.data_;
  }

 private:
  FeatureMatrix data_;
  std::vector<Label> labels_;
  Label class_count_;
};

// Binary container, all fields little-endian:
//   char[4]  magic "LPFS"
//   u32      version (1)
//   u64      n, d, L
//   f32      n*d values, row-major
//   u32      n labels
inline constexpr std::size_t kFeatureHeaderBytes = 32;
inline constexpr std::uint32_t kFeatureFormatVersion = 1;

// Reads either the binary container or the CSV variant (detected by magic).
FeatureSet LoadFeatures(const std::filesystem::path& path);
void SaveFeatures(const FeatureSet& features, const std::filesystem::path& path);
void SaveFeaturesCsv(const FeatureSet& features, const std::filesystem::path& path);

FeatureSet ReadFeaturesBinary(std::istream& in);
void WriteFeaturesBinary(const FeatureSet& features, std::ostream& out);

// CSV: a header line "# n,d,L" (or "# d=2" style key=value pairs, where n and
// L may be omitted), then one row per sample: d values followed by the label.
FeatureSet ReadFeaturesCsv(std::istream& in);
void WriteFeaturesCsv(const FeatureSet& features, std::ostream& out);

// Squared Euclidean distance ||f(x_i) - f(x_j)||^2, accumulated in double.
template <typename DerivedA, typename DerivedB>
double SquaredDistance(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  return (a.template cast<double>() - b.template cast<double>()).squaredNorm();
}

double PairwiseDistance(const FeatureSet& features, Index i, Index j);

struct Chunk {
  FeatureSet features;
  std::vector<Index> original_index;  // chunk row -> row of the source set
};

// Shuffles row indices with Rng(seed) and slices them into `chunks`
// contiguous pieces whose sizes differ by at most one (larger first).
std::vector<Chunk> SplitDisjoint(const FeatureSet& features, Index chunks, std::uint64_t seed);

}  // namespace latentprobe
