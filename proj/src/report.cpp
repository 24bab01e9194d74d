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

#include "latentprobe/report.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <ostream>
#include <sstream>

#include "latentprobe/error.hpp"

namespace latentprobe {
namespace {

std::string Number(double value, int digits = 17) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.*g", digits, value);
  return buffer;
}

std::string Escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::ofstream OpenForWrite(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  return out;
}

}  // namespace

PlotFrame FrameFor(std::span<const ScatterPoint> points) {
  Require(!points.empty(), ErrorCode::kInvalidArgument, "scatter plot needs at least one point");
  PlotFrame frame;
  auto [x_lo, x_hi] = std::minmax_element(points.begin(), points.end(),
                                          [](const auto& a, const auto& b) { return a.x < b.x; });
  auto [y_lo, y_hi] = std::minmax_element(points.begin(), points.end(),
                                          [](const auto& a, const auto& b) { return a.y < b.y; });
  auto pad = [](double lo, double hi, double& out_lo, double& out_hi) {
    const double span = hi - lo;
    if (span <= 0.0) {
      out_lo = lo - 0.5;
      out_hi = hi + 0.5;
    } else {
      out_lo = lo - 0.05 * span;
      out_hi = hi + 0.05 * span;
    }
  };
  pad(x_lo->x, x_hi->x, frame.x_min, frame.x_max);
  pad(y_lo->y, y_hi->y, frame.y_min, frame.y_max);
  return frame;
}

void WriteScatterCsv(std::span<const ScatterPoint> points, std::ostream& out) {
  out << "name,x,y\n";
  for (const auto& p : points) out << p.name << ',' << Number(p.x) << ',' << Number(p.y) << '\n';
}

std::string RenderScatterSvg(std::span<const ScatterPoint> points, const std::optional<LineFit>& fit,
                             const SvgOptions& options) {
  const PlotFrame frame = FrameFor(points);
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << frame.width << "\" height=\"" << frame.height
      << "\" viewBox=\"0 0 " << frame.width << ' ' << frame.height << "\">\n";
  if (options.timestamp_comment) {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    svg << "<!-- generated " << stamp << " -->\n";
  }
  svg << "<rect x=\"0\" y=\"0\" width=\"" << frame.width << "\" height=\"" << frame.height
      << "\" fill=\"white\"/>\n";
  const double left = frame.margin, right = frame.width - frame.margin;
  const double top = frame.margin, bottom = frame.height - frame.margin;
  svg << "<line class=\"axis\" x1=\"" << left << "\" y1=\"" << bottom << "\" x2=\"" << right << "\" y2=\""
      << bottom << "\" stroke=\"black\"/>\n";
  svg << "<line class=\"axis\" x1=\"" << left << "\" y1=\"" << bottom << "\" x2=\"" << left << "\" y2=\"" << top
      << "\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << (left + right) / 2 << "\" y=\"" << frame.height - 15
      << "\" text-anchor=\"middle\" font-size=\"14\">" << Escape(options.x_label) << "</text>\n";
  svg << "<text x=\"15\" y=\"" << (top + bottom) / 2 << "\" text-anchor=\"middle\" font-size=\"14\" "
      << "transform=\"rotate(-90 15 " << (top + bottom) / 2 << ")\">" << Escape(options.y_label) << "</text>\n";
  if (!options.title.empty()) {
    svg << "<text x=\"" << frame.width / 2 << "\" y=\"30\" text-anchor=\"middle\" font-size=\"16\">"
        << Escape(options.title) << "</text>\n";
  }
  if (fit) {
    const double y0 = fit->slope * frame.x_min + fit->intercept;
    const double y1 = fit->slope * frame.x_max + fit->intercept;
    svg << "<line class=\"fit\" x1=\"" << Number(frame.PixelX(frame.x_min)) << "\" y1=\""
        << Number(frame.PixelY(y0)) << "\" x2=\"" << Number(frame.PixelX(frame.x_max)) << "\" y2=\""
        << Number(frame.PixelY(y1)) << "\" stroke=\"#d62728\" stroke-width=\"1.5\"/>\n";
  }
  for (const auto& p : points) {
    const double px = frame.PixelX(p.x), py = frame.PixelY(p.y);
    svg << "<circle class=\"point\" cx=\"" << Number(px) << "\" cy=\"" << Number(py)
        << "\" r=\"4\" fill=\"#1f77b4\"/>\n";
    svg << "<text x=\"" << Number(px + 6, 6) << "\" y=\"" << Number(py - 6, 6) << "\" font-size=\"10\">"
        << Escape(p.name) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void EmitScatter(std::span<const ScatterPoint> points, const std::optional<LineFit>& fit,
                 const std::filesystem::path& csv_path, const std::optional<std::filesystem::path>& svg_path,
                 const SvgOptions& options) {
  Require(!points.empty(), ErrorCode::kInvalidArgument, "scatter plot needs at least one point");
  {
    auto out = OpenForWrite(csv_path);
    WriteScatterCsv(points, out);
    if (!out.flush()) Fail(ErrorCode::kIo, "write to " + csv_path.string() + " failed");
  }
  if (svg_path) {
    auto out = OpenForWrite(*svg_path);
    out << RenderScatterSvg(points, fit, options);
    if (!out.flush()) Fail(ErrorCode::kIo, "write to " + svg_path->string() + " failed");
  }
}

std::vector<ScatterPoint> ScatterOf(const CorrelationReport& report) {
  std::vector<ScatterPoint> points;
  for (const auto& p : report.points) points.push_back({p.indicator, p.robustness, p.name});
  return points;
}

nlohmann::ordered_json ToJson(const CorrelationReport& report) {
  nlohmann::ordered_json doc;
  doc["indicator"] = IndicatorName(report.indicator);
  doc["severity"] = report.severity ? nlohmann::ordered_json(*report.severity) : nlohmann::ordered_json("all");
  doc["r_squared"] = report.r_squared;
  doc["kendall_tau"] = report.kendall_tau;
  doc["fit"] = {{"slope", report.fit.slope}, {"intercept", report.fit.intercept}};
  auto& models = doc["models"] = nlohmann::ordered_json::array();
  for (const auto& p : report.points) {
    models.push_back({{"name", p.name}, {"indicator", p.indicator}, {"robustness", p.robustness}});
  }
  doc["predicted_ranking"] = report.predicted_ranking;
  doc["actual_ranking"] = report.actual_ranking;
  return doc;
}

nlohmann::ordered_json ToJson(const DistanceStats& stats) {
  return {{"mu_intra", stats.mu_intra},
          {"sigma_intra", stats.sigma_intra},
          {"mu_inter", stats.mu_inter},
          {"sigma_inter", stats.sigma_inter},
          {"normalized", stats.normalized}};
}

nlohmann::ordered_json ToJson(const ModelRecord& record) {
  nlohmann::ordered_json doc;
  doc["name"] = record.name;
  doc["clean"] = record.clean_acc;
  doc["corruptions"] = nlohmann::ordered_json::object();
  for (const auto& [name, row] : record.corruption_grid) doc["corruptions"][name] = row;
  if (record.printed_acc_all) doc["acc_all"] = *record.printed_acc_all;
  auto scores = [&](const char* key, const std::optional<double>& acc, const std::optional<double>& purity) {
    if (!acc && !purity) return;
    auto& node = doc[key] = nlohmann::ordered_json::object();
    if (acc) node["acc"] = *acc;
    if (purity) node["purity"] = *purity;
  };
  scores("kmeans", record.kmeans_acc, record.kmeans_purity);
  scores("multicut", record.mc_acc, record.mc_purity);
  if (record.delta) doc["delta"] = *record.delta;
  return doc;
}

void WriteSweepCsv(const SweepResult& sweep, std::ostream& out) {
  out << "threshold,cluster_accuracy,purity,cluster_count,singleton_count\n";
  for (const auto& row : sweep.rows) {
    out << Number(row.theta) << ',' << Number(row.accuracy) << ',' << Number(row.purity) << ','
        << row.cluster_count << ',' << row.singleton_count << '\n';
  }
}

void WriteJson(const nlohmann::ordered_json& doc, const std::filesystem::path& path) {
  auto out = OpenForWrite(path);
  out << doc.dump(2) << '\n';
  if (!out.flush()) Fail(ErrorCode::kIo, "write to " + path.string() + " failed");
}

}  // namespace latentprobe
