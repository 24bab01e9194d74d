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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

namespace latentprobe {

using ClusterId = std::uint32_t;

// Assignment of N items to cluster ids 0..K-1, every id in use.
class Clustering {
 public:
  Clustering() = default;
  // Validates contiguity: K = max id + 1 and each id in [0, K) occurs.
  explicit Clustering(std::vector<ClusterId> assignment);

  // Relabels arbitrary ids to 0..K-1 in order of first occurrence.
  static Clustering Canonical(std::span<const std::uint64_t> raw_ids);
  static Clustering Singletons(std::size_t n);
  static Clustering OneCluster(std::size_t n);

  std::size_t size() const { return assignment_.size(); }
  ClusterId cluster_count() const { return cluster_count_; }
  ClusterId operator[](std::size_t i) const { return assignment_[i]; }
  const std::vector<ClusterId>& assignment() const { return assignment_; }

  std::vector<std::size_t> ClusterSizes() const;

  friend bool operator==(const Clustering&, const Clustering&) = default;

 private:
  std::vector<ClusterId> assignment_;
  ClusterId cluster_count_ = 0;
};

// Same container style as the feature labels:
//   char[4] magic "LPCL", u32 version (1), u64 n, u64 K, u32 n cluster ids.
void SaveClustering(const Clustering& clustering, const std::filesystem::path& path);
Clustering LoadClustering(const std::filesystem::path& path);
void WriteClustering(const Clustering& clustering, std::ostream& out);
Clustering ReadClustering(std::istream& in);

}  // namespace latentprobe
