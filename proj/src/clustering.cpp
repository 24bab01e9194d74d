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

#include "latentprobe/clustering.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <unordered_map>

#include "latentprobe/error.hpp"

namespace latentprobe {
namespace {

constexpr std::array<char, 4> kMagic = {'L', 'P', 'C', 'L'};

void PutU32(std::ostream& out, std::uint32_t v) {
  const char bytes[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                         static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
  out.write(bytes, 4);
}

void PutU64(std::ostream& out, std::uint64_t v) {
  PutU32(out, static_cast<std::uint32_t>(v));
  PutU32(out, static_cast<std::uint32_t>(v >> 32));
}

bool GetU32(std::istream& in, std::uint32_t& v) {
  unsigned char bytes[4];
  if (!in.read(reinterpret_cast<char*>(bytes), 4)) return false;
  v = bytes[0] | (bytes[1] << 8) | (bytes[2] << 16) | (static_cast<std::uint32_t>(bytes[3]) << 24);
  return true;
}

bool GetU64(std::istream& in, std::uint64_t& v) {
  std::uint32_t lo = 0, hi = 0;
  if (!GetU32(in, lo) || !GetU32(in, hi)) return false;
  v = lo | (static_cast<std::uint64_t>(hi) << 32);
  return true;
}

}  // namespace

Clustering::Clustering(std::vector<ClusterId> assignment) : assignment_(std::move(assignment)) {
  if (assignment_.empty()) return;
  cluster_count_ = *std::max_element(assignment_.begin(), assignment_.end()) + 1;
  std::vector<bool> seen(cluster_count_, false);
  for (ClusterId id : assignment_) seen[id] = true;
  Require(std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }), ErrorCode::kInvalidArgument,
          "cluster ids must be contiguous from 0");
}

Clustering Clustering::Canonical(std::span<const std::uint64_t> raw_ids) {
  std::unordered_map<std::uint64_t, ClusterId> remap;
  std::vector<ClusterId> ids(raw_ids.size());
  for (std::size_t i = 0; i < raw_ids.size(); ++i) {
    auto [it, inserted] = remap.try_emplace(raw_ids[i], static_cast<ClusterId>(remap.size()));
    ids[i] = it->second;
  }
  return Clustering(std::move(ids));
}

Clustering Clustering::Singletons(std::size_t n) {
  std::vector<ClusterId> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = static_cast<ClusterId>(i);
  return Clustering(std::move(ids));
}

Clustering Clustering::OneCluster(std::size_t n) { return Clustering(std::vector<ClusterId>(n, 0)); }

std::vector<std::size_t> Clustering::ClusterSizes() const {
  std::vector<std::size_t> sizes(cluster_count_, 0);
  for (ClusterId id : assignment_) ++sizes[id];
  return sizes;
}

void WriteClustering(const Clustering& clustering, std::ostream& out) {
  out.write(kMagic.data(), kMagic.size());
  PutU32(out, 1);
  PutU64(out, clustering.size());
  PutU64(out, clustering.cluster_count());
  for (ClusterId id : clustering.assignment()) PutU32(out, id);
}

Clustering ReadClustering(std::istream& in) {
  std::array<char, 4> magic;
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    Fail(ErrorCode::kMalformedHeader, "not a clustering file (bad magic)");
  }
  std::uint32_t version = 0;
  std::uint64_t n = 0, k = 0;
  if (!GetU32(in, version) || !GetU64(in, n) || !GetU64(in, k)) {
    Fail(ErrorCode::kMalformedHeader, "clustering header is truncated");
  }
  Require(version == 1, ErrorCode::kMalformedHeader, "unsupported clustering version");
  Require(n <= (1ULL << 36), ErrorCode::kMalformedHeader, "implausible clustering size");
  std::vector<ClusterId> ids(n);
  for (auto& id : ids) {
    if (!GetU32(in, id)) Fail(ErrorCode::kTruncatedPayload, "clustering payload is truncated");
    Require(id < k, ErrorCode::kLabelOutOfRange, "cluster id exceeds declared cluster count");
  }
  Clustering clustering(std::move(ids));
  Require(clustering.cluster_count() == k, ErrorCode::kMalformedHeader,
          "declared cluster count does not match the ids present");
  return clustering;
}

void SaveClustering(const Clustering& clustering, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  WriteClustering(clustering, out);
  if (!out.flush()) Fail(ErrorCode::kIo, "write to " + path.string() + " failed");
}

Clustering LoadClustering(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open clustering file " + path.string());
  return ReadClustering(in);
}

}  // namespace latentprobe
