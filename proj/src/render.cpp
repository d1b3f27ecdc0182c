/*
 * Copyright 2026 The sxai Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "sxai/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <vector>

#include "sxai/report_io.hpp"

namespace sxai {

namespace {

constexpr Rgb kNeutral{242, 241, 241};
constexpr Rgb kPositive{218, 59, 70};
constexpr Rgb kNegative{59, 110, 218};

// A labelled grid of values; the common shape behind every table we draw.
struct Table {
  std::string title;
  std::vector<std::string> columns;
  std::vector<std::string> rows;
  std::vector<std::vector<std::optional<double>>> cells;  // [row][col]
};

double MaxAbs(const Table& t) {
  double m = 0.0;
  for (const auto& row : t.cells) {
    for (const auto& c : row) {
      if (c) m = std::max(m, std::abs(*c));
    }
  }
  return m;
}

std::string Fmt(double v, const char* spec = "%.3f") {
  char buf[32];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

std::string Hex(Rgb c) {
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02X%02X%02X", c.r, c.g, c.b);
  return buf;
}

std::string Escape(std::string_view s) {
  std::string out;
  for (char c : s) {
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

std::string RowLabel(const TargetSpec& t) { return t.head + "=" + t.cls; }

std::vector<Table> BuildTables(const AttributionReport& report) {
  std::vector<Table> tables;

  Table words{"Word-level attribution", {}, {}, {}};
  if (!report.targets.empty()) {
    for (const auto& s : report.targets.front().words.scores) words.columns.push_back(s.segment.text);
  }
  for (const auto& t : report.targets) {
    words.rows.push_back(RowLabel(t.words.target));
    std::vector<std::optional<double>> row;
    for (const auto& s : t.words.scores) row.emplace_back(s.r);
    row.resize(words.columns.size());
    words.cells.push_back(std::move(row));
  }
  tables.push_back(std::move(words));

  Table para{"Paralinguistic attribution", {}, {}, {}};
  std::vector<FeatureDirection> dirs;
  for (const auto& t : report.targets) {
    for (const auto& [d, rel] : t.paralinguistic.directions) {
      if (std::find(dirs.begin(), dirs.end(), d) == dirs.end()) dirs.push_back(d);
    }
  }
  std::sort(dirs.begin(), dirs.end());
  for (auto d : dirs) para.columns.emplace_back(DirectionName(d));
  for (const auto& t : report.targets) {
    para.rows.push_back(RowLabel(t.paralinguistic.target));
    std::vector<std::optional<double>> row;
    for (auto d : dirs) {
      const auto it = t.paralinguistic.directions.find(d);
      row.push_back(it == t.paralinguistic.directions.end()
                        ? std::nullopt
                        : std::optional<double>(it->second.relevance));
    }
    para.cells.push_back(std::move(row));
  }
  tables.push_back(std::move(para));

  // One heatmap per feature, parameters as columns.
  for (Feature f : {Feature::kPitch, Feature::kStretch, Feature::kReverb, Feature::kNoise}) {
    std::vector<double> params;
    for (const auto& t : report.targets) {
      for (const auto& [d, rel] : t.paralinguistic.directions) {
        for (const auto& g : rel.grid) {
          if (DirectionOf(f, g.parameter) == d &&
              std::find(params.begin(), params.end(), g.parameter) == params.end()) {
            params.push_back(g.parameter);
          }
        }
      }
    }
    if (params.empty()) continue;
    std::sort(params.begin(), params.end());
    Table heat{std::string("Prediction difference: ") + std::string(FeatureName(f)), {}, {}, {}};
    for (double p : params) heat.columns.push_back(Fmt(p, "%g"));
    for (const auto& t : report.targets) {
      heat.rows.push_back(RowLabel(t.paralinguistic.target));
      std::vector<std::optional<double>> row(params.size());
      for (size_t i = 0; i < params.size(); ++i) {
        const auto it = t.paralinguistic.directions.find(DirectionOf(f, params[i]));
        if (it == t.paralinguistic.directions.end()) continue;
        for (const auto& g : it->second.grid) {
          if (g.parameter == params[i]) row[i] = g.delta;
        }
      }
      heat.cells.push_back(std::move(row));
    }
    tables.push_back(std::move(heat));
  }
  return tables;
}

std::string Html(const AttributionReport& report) {
  std::ostringstream out;
  out << "<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\"><title>" << Escape(report.id)
      << "</title>\n<style>body{font-family:sans-serif}table{border-collapse:collapse;"
         "margin:12px 0}td,th{padding:4px 8px;border:1px solid #ddd;text-align:center}"
         "</style></head><body>\n<h1>"
      << Escape(report.id) << "</h1>\n";
  for (const auto& t : BuildTables(report)) {
    const double m = MaxAbs(t);
    out << "<h2>" << Escape(t.title) << "</h2>\n<table>\n<tr><th></th>";
    for (const auto& c : t.columns) out << "<th>" << Escape(c) << "</th>";
    out << "</tr>\n";
    for (size_t r = 0; r < t.rows.size(); ++r) {
      out << "<tr><th>" << Escape(t.rows[r]) << "</th>";
      for (const auto& c : t.cells[r]) {
        if (!c) {
          out << "<td></td>";
          continue;
        }
        out << "<td style=\"background:" << Hex(DivergingColor(*c, m)) << "\">" << Fmt(*c)
            << "</td>";
      }
      out << "</tr>\n";
    }
    out << "</table>\n";
  }
  out << "</body></html>\n";
  return out.str();
}

std::string Svg(const AttributionReport& report) {
  constexpr int kCellW = 72, kCellH = 24, kLabelW = 160, kTitleH = 28, kGap = 16;
  const auto tables = BuildTables(report);
  int width = kLabelW, height = kGap;
  for (const auto& t : tables) {
    width = std::max(width, kLabelW + kCellW * static_cast<int>(t.columns.size()));
    height += kTitleH + kCellH * (1 + static_cast<int>(t.rows.size())) + kGap;
  }
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width + kGap << "\" height=\""
      << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  int y = kGap;
  for (const auto& t : tables) {
    const double m = MaxAbs(t);
    out << "<text x=\"4\" y=\"" << y + 18 << "\" font-weight=\"bold\">" << Escape(t.title)
        << "</text>\n";
    y += kTitleH;
    for (size_t c = 0; c < t.columns.size(); ++c) {
      out << "<text x=\"" << kLabelW + kCellW * static_cast<int>(c) + kCellW / 2 << "\" y=\""
          << y + 16 << "\" text-anchor=\"middle\">" << Escape(t.columns[c]) << "</text>\n";
    }
    y += kCellH;
    for (size_t r = 0; r < t.rows.size(); ++r) {
      out << "<text x=\"4\" y=\"" << y + 16 << "\">" << Escape(t.rows[r]) << "</text>\n";
      for (size_t c = 0; c < t.cells[r].size(); ++c) {
        if (!t.cells[r][c]) continue;
        const int x = kLabelW + kCellW * static_cast<int>(c);
        out << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << kCellW << "\" height=\""
            << kCellH << "\" fill=\"" << Hex(DivergingColor(*t.cells[r][c], m)) << "\"/>"
            << "<text x=\"" << x + kCellW / 2 << "\" y=\"" << y + 16
            << "\" text-anchor=\"middle\">" << Fmt(*t.cells[r][c]) << "</text>\n";
      }
      y += kCellH;
    }
    y += kGap;
  }
  out << "</svg>\n";
  return out.str();
}

std::string Ansi(const AttributionReport& report) {
  std::ostringstream out;
  out << report.id << "\n";
  for (const auto& t : BuildTables(report)) {
    const double m = MaxAbs(t);
    size_t label_w = 0;
    for (const auto& r : t.rows) label_w = std::max(label_w, r.size());
    size_t cell_w = 7;
    for (const auto& c : t.columns) cell_w = std::max(cell_w, c.size() + 1);

    out << "\n" << t.title << "\n" << std::string(label_w, ' ');
    for (const auto& c : t.columns) out << ' ' << std::string(cell_w - c.size(), ' ') << c;
    out << "\n";
    for (size_t r = 0; r < t.rows.size(); ++r) {
      out << t.rows[r] << std::string(label_w - t.rows[r].size(), ' ');
      for (const auto& c : t.cells[r]) {
        out << ' ';
        if (!c) {
          out << std::string(cell_w, ' ');
          continue;
        }
        const Rgb col = DivergingColor(*c, m);
        const std::string v = Fmt(*c);
        out << "\x1b[48;2;" << int{col.r} << ';' << int{col.g} << ';' << int{col.b}
            << "m\x1b[38;2;0;0;0m" << std::string(cell_w - std::min(cell_w, v.size()), ' ') << v
            << "\x1b[0m";
      }
      out << "\n";
    }
  }
  return out.str();
}

}  // namespace

std::optional<RenderFormat> ParseRenderFormat(std::string_view name) {
  if (name == "json") return RenderFormat::kJson;
  if (name == "html") return RenderFormat::kHtml;
  if (name == "svg") return RenderFormat::kSvg;
  if (name == "ansi" || name == "ansi-text" || name == "text") return RenderFormat::kAnsi;
  return std::nullopt;
}

Rgb DivergingColor(double value, double max_abs) {
  if (!(max_abs > 0.0) || value == 0.0 || !std::isfinite(value)) return kNeutral;
  const double t = std::min(1.0, std::abs(value) / max_abs);
  const Rgb& end = value > 0.0 ? kPositive : kNegative;
  auto mix = [t](uint8_t a, uint8_t b) {
    return static_cast<uint8_t>(std::lround(a + (static_cast<double>(b) - a) * t));
  };
  return {mix(kNeutral.r, end.r), mix(kNeutral.g, end.g), mix(kNeutral.b, end.b)};
}

std::string RenderReport(const AttributionReport& report, RenderFormat format) {
  switch (format) {
    case RenderFormat::kJson: return AttributionReportToJson(report);
    case RenderFormat::kHtml: return Html(report);
    case RenderFormat::kSvg: return Svg(report);
    case RenderFormat::kAnsi: return Ansi(report);
  }
  return {};
}

}  // namespace sxai
