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

#include "latentprobe/featureset.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>

#include "latentprobe/error.hpp"
#include "latentprobe/random.hpp"

namespace latentprobe {
namespace {

constexpr std::array<char, 4> kMagic = {'L', 'P', 'F', 'S'};

template <typename T>
void PutLittleEndian(std::ostream& out, T value) {
  using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
  U bits = std::bit_cast<U>(value);
  std::array<char, sizeof(U)> bytes;
  for (std::size_t i = 0; i < sizeof(U); ++i) {
    bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
  }
  out.write(bytes.data(), bytes.size());
}

template <typename T>
bool GetLittleEndian(std::istream& in, T& value) {
  using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
  std::array<unsigned char, sizeof(U)> bytes;
  if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) return false;
  U bits = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) bits |= static_cast<U>(bytes[i]) << (8 * i);
  value = std::bit_cast<T>(bits);
  return true;
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> SplitFields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(Trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

std::optional<std::uint64_t> ParseCount(std::string_view s) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

struct CsvHeader {
  std::optional<std::uint64_t> n, d, class_count;
};

CsvHeader ParseCsvHeader(std::string_view line) {
  line = Trim(line);
  if (line.empty() || line.front() != '#') {
    Fail(ErrorCode::kMalformedHeader, "CSV features must start with a '# n,d,L' header line");
  }
  line = Trim(line.substr(1));
  CsvHeader header;
  const auto fields = SplitFields(line);
  const bool keyed = line.find('=') != std::string_view::npos;
  if (!keyed) {
    if (fields.size() != 3) Fail(ErrorCode::kMalformedHeader, "CSV header needs three counts n,d,L");
    header.n = ParseCount(fields[0]);
    header.d = ParseCount(fields[1]);
    header.class_count = ParseCount(fields[2]);
    if (!header.n || !header.d || !header.class_count) {
      Fail(ErrorCode::kMalformedHeader, "CSV header counts must be non-negative integers");
    }
    return header;
  }
  for (auto field : fields) {
    const auto eq = field.find('=');
    if (eq == std::string_view::npos) Fail(ErrorCode::kMalformedHeader, "bad CSV header field");
    const auto key = Trim(field.substr(0, eq));
    const auto value = ParseCount(Trim(field.substr(eq + 1)));
    if (!value) Fail(ErrorCode::kMalformedHeader, "CSV header value must be an integer");
    if (key == "n") {
      header.n = value;
    } else if (key == "d") {
      header.d = value;
    } else if (key == "L") {
      header.class_count = value;
    } else {
      Fail(ErrorCode::kMalformedHeader, "unknown CSV header key '" + std::string(key) + "'");
    }
  }
  if (!header.d) Fail(ErrorCode::kMalformedHeader, "CSV header must declare d");
  return header;
}

}  // namespace

FeatureSet::FeatureSet(FeatureMatrix data, std::vector<Label> labels, Label class_count)
    : data_(std::move(data)), labels_(std::move(labels)), class_count_(class_count) {
  Require(data_.rows() >= 1, ErrorCode::kEmptySet, "feature set must hold at least one sample");
  Require(data_.cols() >= 1, ErrorCode::kEmptySet, "feature dimension must be at least one");
  Require(static_cast<Index>(labels_.size()) == data_.rows(), ErrorCode::kDimensionMismatch,
          "label count does not match sample count");
  Require(data_.allFinite(), ErrorCode::kNonFinite, "feature matrix contains a non-finite value");
  for (Label label : labels_) {
    Require(label < class_count_, ErrorCode::kLabelOutOfRange,
            "label " + std::to_string(label) + " >= class count " + std::to_string(class_count_));
  }
}

FeatureSet FeatureSet::Subset(std::span<const Index> rows) const {
  FeatureMatrix data(static_cast<Index>(rows.size()), dim());
  std::vector<Label> labels(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    Require(rows[r] >= 0 && rows[r] < size(), ErrorCode::kIndexOutOfRange, "subset row out of range");
    data.row(static_cast<Index>(r)) = data_.row(rows[r]);
    labels[r] = labels_[static_cast<std::size_t>(rows[r])];
  }
  return FeatureSet(std::move(data), std::move(labels), class_count_);
}

void WriteFeaturesBinary(const FeatureSet& features, std::ostream& out) {
  out.write(kMagic.data(), kMagic.size());
  PutLittleEndian(out, kFeatureFormatVersion);
  PutLittleEndian(out, static_cast<std::uint64_t>(features.size()));
  PutLittleEndian(out, static_cast<std::uint64_t>(features.dim()));
  PutLittleEndian(out, static_cast<std::uint64_t>(features.class_count()));
  const FeatureMatrix& data = features.data();
  for (Index i = 0; i < data.rows(); ++i) {
    for (Index j = 0; j < data.cols(); ++j) PutLittleEndian(out, data(i, j));
  }
  for (Label label : features.labels()) PutLittleEndian(out, label);
}

FeatureSet ReadFeaturesBinary(std::istream& in) {
  std::array<char, 4> magic;
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    Fail(ErrorCode::kMalformedHeader, "not a feature container (bad magic)");
  }
  std::uint32_t version = 0;
  std::uint64_t n = 0, d = 0, class_count = 0;
  if (!GetLittleEndian(in, version) || !GetLittleEndian(in, n) || !GetLittleEndian(in, d) ||
      !GetLittleEndian(in, class_count)) {
    Fail(ErrorCode::kMalformedHeader, "feature container header is truncated");
  }
  Require(version == kFeatureFormatVersion, ErrorCode::kMalformedHeader,
          "unsupported feature container version " + std::to_string(version));
  Require(n >= 1 && d >= 1, ErrorCode::kMalformedHeader, "feature container declares an empty set");
  Require(class_count <= UINT32_MAX && n <= (1ULL << 40) / d, ErrorCode::kMalformedHeader,
          "feature container dimensions are implausible");

  FeatureMatrix data(static_cast<Index>(n), static_cast<Index>(d));
  for (Index i = 0; i < data.rows(); ++i) {
    for (Index j = 0; j < data.cols(); ++j) {
      if (!GetLittleEndian(in, data(i, j))) {
        Fail(ErrorCode::kTruncatedPayload,
             "feature payload ends at row " + std::to_string(i) + " of " + std::to_string(n));
      }
    }
  }
  std::vector<Label> labels(n);
  for (auto& label : labels) {
    if (!GetLittleEndian(in, label)) Fail(ErrorCode::kTruncatedPayload, "label payload is truncated");
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    Fail(ErrorCode::kDimensionMismatch, "feature container has trailing bytes beyond n*d");
  }
  return FeatureSet(std::move(data), std::move(labels), static_cast<Label>(class_count));
}

FeatureSet ReadFeaturesCsv(std::istream& in) {
  std::string line;
  CsvHeader header;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (Trim(line).empty()) continue;
    header = ParseCsvHeader(line);
    have_header = true;
    break;
  }
  if (!have_header) Fail(ErrorCode::kMalformedHeader, "CSV features are empty");
  const auto d = static_cast<Index>(*header.d);
  Require(d >= 1, ErrorCode::kMalformedHeader, "CSV header declares d = 0");

  std::vector<float> values;
  std::vector<Label> labels;
  std::uint64_t max_label = 0;
  while (std::getline(in, line)) {
    const auto trimmed = Trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    const auto fields = SplitFields(trimmed);
    if (static_cast<Index>(fields.size()) != d + 1) {
      Fail(ErrorCode::kDimensionMismatch, "CSV row " + std::to_string(labels.size()) + " has " +
                                              std::to_string(fields.size()) + " fields, expected " +
                                              std::to_string(d + 1));
    }
    for (Index j = 0; j < d; ++j) {
      const auto field = fields[static_cast<std::size_t>(j)];
      double value = 0.0;
      auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
      if (ec == std::errc::result_out_of_range) Fail(ErrorCode::kNonFinite, "CSV value overflows");
      if (ec != std::errc() || ptr != field.data() + field.size()) {
        Fail(ErrorCode::kDimensionMismatch, "unparsable CSV value '" + std::string(field) + "'");
      }
      const auto stored = static_cast<float>(value);
      if (!std::isfinite(stored)) Fail(ErrorCode::kNonFinite, "CSV value is not finite");
      values.push_back(stored);
    }
    const auto label = ParseCount(fields.back());
    if (!label) Fail(ErrorCode::kLabelOutOfRange, "CSV label must be a non-negative integer");
    if (header.class_count && *label >= *header.class_count) {
      Fail(ErrorCode::kLabelOutOfRange, "CSV label " + std::to_string(*label) + " out of range");
    }
    max_label = std::max(max_label, *label);
    labels.push_back(static_cast<Label>(*label));
  }
  if (header.n) {
    if (labels.size() < *header.n) {
      Fail(ErrorCode::kTruncatedPayload, "CSV declares " + std::to_string(*header.n) + " rows but has " +
                                             std::to_string(labels.size()));
    }
    if (labels.size() > *header.n) Fail(ErrorCode::kDimensionMismatch, "CSV has more rows than declared");
  }
  Require(!labels.empty(), ErrorCode::kEmptySet, "CSV holds no samples");
  const Label class_count = header.class_count ? static_cast<Label>(*header.class_count)
                                               : static_cast<Label>(max_label + 1);
  FeatureMatrix data =
      Eigen::Map<FeatureMatrix>(values.data(), static_cast<Index>(labels.size()), d);
  return FeatureSet(std::move(data), std::move(labels), class_count);
}

void WriteFeaturesCsv(const FeatureSet& features, std::ostream& out) {
  out << "# " << features.size() << ',' << features.dim() << ',' << features.class_count() << '\n';
  std::array<char, 32> buffer;
  for (Index i = 0; i < features.size(); ++i) {
    for (Index j = 0; j < features.dim(); ++j) {
      std::snprintf(buffer.data(), buffer.size(), "%.9g", static_cast<double>(features.data()(i, j)));
      out << buffer.data() << ',';
    }
    out << features.labels()[static_cast<std::size_t>(i)] << '\n';
  }
}

FeatureSet LoadFeatures(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open feature file " + path.string());
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  const bool binary = in.gcount() == 4 && magic == kMagic;
  in.clear();
  in.seekg(0);
  return binary ? ReadFeaturesBinary(in) : ReadFeaturesCsv(in);
}

void SaveFeatures(const FeatureSet& features, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  WriteFeaturesBinary(features, out);
  if (!out.flush()) Fail(ErrorCode::kIo, "write to " + path.string() + " failed");
}

void SaveFeaturesCsv(const FeatureSet& features, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) Fail(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  WriteFeaturesCsv(features, out);
  if (!out.flush()) Fail(ErrorCode::kIo, "write to " + path.string() + " failed");
}

double PairwiseDistance(const FeatureSet& features, Index i, Index j) {
  Require(i >= 0 && i < features.size() && j >= 0 && j < features.size(), ErrorCode::kIndexOutOfRange,
          "pairwise distance index out of range");
  return SquaredDistance(features.row(i), features.row(j));
}

std::vector<Chunk> SplitDisjoint(const FeatureSet& features, Index chunks, std::uint64_t seed) {
  const Index n = features.size();
  Require(chunks >= 1 && chunks <= n, ErrorCode::kInvalidArgument,
          "chunk count must lie in [1, " + std::to_string(n) + "]");
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  Rng rng(seed);
  rng.Shuffle(std::span<Index>(order));

  std::vector<Chunk> result;
  result.reserve(static_cast<std::size_t>(chunks));
  const Index base = n / chunks;
  const Index extra = n % chunks;
  Index offset = 0;
  for (Index c = 0; c < chunks; ++c) {
    const Index count = base + (c < extra ? 1 : 0);
    std::vector<Index> rows(order.begin() + offset, order.begin() + offset + count);
    offset += count;
    FeatureSet subset = features.Subset(rows);
    result.push_back(Chunk{std::move(subset), std::move(rows)});
  }
  return result;
}

}  // namespace latentprobe
