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

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>

#include "json.hpp"
#include "latentprobe/indicators.hpp"
#include "latentprobe/metrics.hpp"
#include "latentprobe/multicut.hpp"

namespace latentprobe {

inline constexpr int kSchemaVersion = 1;

struct ScatterPoint {
  double x = 0.0;
  double y = 0.0;
  std::string name;
};

// Data-to-pixel mapping of the scatter plot; y grows downwards in pixels.
struct PlotFrame {
  double width = 640.0;
  double height = 480.0;
  double margin = 60.0;
  double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;

  double PixelX(double x) const { return margin + (x - x_min) / (x_max - x_min) * (width - 2 * margin); }
  double PixelY(double y) const { return height - margin - (y - y_min) / (y_max - y_min) * (height - 2 * margin); }
};

// Bounds of the points padded by 5% (unit span around degenerate axes).
PlotFrame FrameFor(std::span<const ScatterPoint> points);

// "name,x,y" header plus one row per point, values with 17 significant digits.
void WriteScatterCsv(std::span<const ScatterPoint> points, std::ostream& out);

struct SvgOptions {
  std::string title;
  std::string x_label = "indicator p";
  std::string y_label = "robustness";
  bool timestamp_comment = false;
};

std::string RenderScatterSvg(std::span<const ScatterPoint> points, const std::optional<LineFit>& fit,
                             const SvgOptions& options);

// Writes the CSV and, when `svg_path` is given, the SVG.
void EmitScatter(std::span<const ScatterPoint> points, const std::optional<LineFit>& fit,
                 const std::filesystem::path& csv_path, const std::optional<std::filesystem::path>& svg_path,
                 const SvgOptions& options = {});

std::vector<ScatterPoint> ScatterOf(const CorrelationReport& report);

nlohmann::ordered_json ToJson(const CorrelationReport& report);
nlohmann::ordered_json ToJson(const DistanceStats& stats);
nlohmann::ordered_json ToJson(const ModelRecord& record);

void WriteSweepCsv(const SweepResult& sweep, std::ostream& out);

// Serializes with a trailing newline; key order is insertion order so equal
// inputs give byte-identical files.
void WriteJson(const nlohmann::ordered_json& doc, const std::filesystem::path& path);

}  // namespace latentprobe
