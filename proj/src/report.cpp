// Copyright (c) 2026, The alphakit Authors. All rights reserved.
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

#include "alphakit/report.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "alphakit/image_io.hpp"
#include "alphakit/raster.hpp"
#include "alphakit/text_io.hpp"

namespace alphakit {

const std::vector<std::string>& metric_names() {
  static const std::vector<std::string> names{"sad", "mse", "grad", "conn"};
  return names;
}

namespace {

std::string join(const CsvRow& row) {
  std::string out;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out += ',';
    out += row[i];
  }
  return out;
}

std::vector<CsvRow> read_csv_with_header(const std::filesystem::path& path, const char* header) {
  auto rows = parse_csv(read_text_file(path));
  if (rows.empty() || join(rows.front()) != header) {
    throw InputError("schema mismatch in '" + path.string() + "': expected header '" + header +
                     "'");
  }
  rows.erase(rows.begin());
  return rows;
}

std::optional<double> parse_cell(const std::string& text, const std::filesystem::path& path) {
  try {
    return parse_optional(text);
  } catch (const InputError&) {
    throw InputError("schema mismatch in '" + path.string() + "': bad number '" + text + "'");
  }
}

}  // namespace

std::string ComparisonTable::to_markdown() const {
  std::string out = "| method | SAD | MSE | Grad | Conn |\n|---|---|---|---|---|\n";
  for (const ComparisonRow& r : rows) {
    out += "| " + r.label + " | " + format_optional(r.sad) + " | " + format_optional(r.mse) +
           " | " + format_optional(r.grad) + " | " + format_optional(r.conn) + " |\n";
  }
  return out;
}

std::string ComparisonTable::to_csv() const {
  std::string out = "method,sad,mse,grad,conn\n";
  for (const ComparisonRow& r : rows) {
    out += csv_escape(r.label) + "," + format_optional(r.sad) + "," + format_optional(r.mse) +
           "," + format_optional(r.grad) + "," + format_optional(r.conn) + "\n";
  }
  return out;
}

ComparisonTable merge_reports(const std::vector<std::filesystem::path>& csv_paths,
                              const std::vector<std::string>& labels) {
  if (csv_paths.size() != labels.size()) {
    throw InputError("merge_reports: " + std::to_string(csv_paths.size()) + " files but " +
                     std::to_string(labels.size()) + " labels");
  }
  if (csv_paths.empty()) throw InputError("merge_reports: no inputs");
  std::set<std::string> seen;
  ComparisonTable table;
  for (std::size_t i = 0; i < csv_paths.size(); ++i) {
    if (!seen.insert(labels[i]).second) {
      throw InputError("merge_reports: duplicate label '" + labels[i] + "'");
    }
    const auto rows = read_csv_with_header(csv_paths[i], kEvalCsvHeader);
    const CsvRow* mean = nullptr;
    for (const CsvRow& row : rows) {
      if (row.size() != 6) {
        throw InputError("schema mismatch in '" + csv_paths[i].string() + "': row with " +
                         std::to_string(row.size()) + " fields");
      }
      if (row[0] == "MEAN") mean = &row;
    }
    if (!mean) throw InputError("no MEAN row in '" + csv_paths[i].string() + "'");
    table.rows.push_back({labels[i], parse_cell((*mean)[1], csv_paths[i]),
                          parse_cell((*mean)[2], csv_paths[i]),
                          parse_cell((*mean)[3], csv_paths[i]),
                          parse_cell((*mean)[4], csv_paths[i])});
  }
  std::stable_sort(table.rows.begin(), table.rows.end(),
                   [](const ComparisonRow& a, const ComparisonRow& b) {
                     if (a.sad.has_value() != b.sad.has_value()) return a.sad.has_value();
                     if (a.sad && *a.sad != *b.sad) return *a.sad < *b.sad;
                     return a.label < b.label;
                   });
  return table;
}

std::vector<CurvePoint> robustness_table(const std::vector<std::filesystem::path>& sweep_csvs,
                                         const std::vector<std::string>& expected_labels) {
  if (sweep_csvs.empty()) throw InputError("robustness_table: no inputs");
  // method -> metric -> label -> value, with first-seen method order kept.
  std::vector<std::string> methods;
  std::map<std::string, std::map<std::string, std::map<std::string, std::optional<double>>>> data;
  for (const auto& path : sweep_csvs) {
    for (const CsvRow& row : read_csv_with_header(path, kSweepCsvHeader)) {
      if (row.size() != 4) {
        throw InputError("schema mismatch in '" + path.string() + "': row with " +
                         std::to_string(row.size()) + " fields");
      }
      const std::string& method = row[0];
      const std::string& label = row[1];
      const std::string& metric = row[2];
      if (std::find(metric_names().begin(), metric_names().end(), metric) ==
          metric_names().end()) {
        throw InputError("unknown metric '" + metric + "' in '" + path.string() + "'");
      }
      if (std::find(expected_labels.begin(), expected_labels.end(), label) ==
          expected_labels.end()) {
        throw InputError("unexpected set label '" + label + "' in '" + path.string() + "'");
      }
      if (!data.count(method)) methods.push_back(method);
      auto& cell = data[method][metric];
      if (cell.count(label)) {
        throw InputError("duplicate row " + method + "/" + label + "/" + metric + " in '" +
                         path.string() + "'");
      }
      cell[label] = parse_cell(row[3], path);
    }
  }
  std::vector<CurvePoint> out;
  for (const std::string& method : methods) {
    for (const std::string& metric : metric_names()) {
      const auto it = data[method].find(metric);
      for (const std::string& label : expected_labels) {
        if (it == data[method].end() || !it->second.count(label)) {
          throw InputError("method '" + method + "' is missing set label '" + label +
                           "' for metric " + metric);
        }
        out.push_back({method, label, metric, it->second.at(label)});
      }
    }
  }
  return out;
}

std::string curves_csv(const std::vector<CurvePoint>& points) {
  std::string out = std::string(kSweepCsvHeader) + "\n";
  for (const CurvePoint& p : points) {
    out += csv_escape(p.method) + "," + csv_escape(p.set_label) + "," + p.metric + "," +
           format_optional(p.value) + "\n";
  }
  return out;
}

namespace {

void draw_line(RasterImage& img, double x0, double y0, double x1, double y1,
               const std::array<float, 3>& color) {
  const int steps = static_cast<int>(std::ceil(std::max(std::fabs(x1 - x0), std::fabs(y1 - y0)))) + 1;
  for (int s = 0; s <= steps; ++s) {
    const double t = static_cast<double>(s) / steps;
    const int cx = static_cast<int>(std::lround(x0 + t * (x1 - x0)));
    const int cy = static_cast<int>(std::lround(y0 + t * (y1 - y0)));
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        const int x = cx + dx;
        const int y = cy + dy;
        if (x < 0 || y < 0 || x >= img.width() || y >= img.height()) continue;
        for (int c = 0; c < 3; ++c) img.at(x, y, c) = color[static_cast<std::size_t>(c)];
      }
    }
  }
}

}  // namespace

void write_curve_plot(const std::filesystem::path& path, const std::vector<CurvePoint>& points,
                      const std::string& metric, const std::vector<std::string>& labels) {
  constexpr int kWidth = 480;
  constexpr int kHeight = 320;
  constexpr int kMargin = 32;
  static const std::array<std::array<float, 3>, 6> kPalette{{{0.12f, 0.47f, 0.71f},
                                                            {1.0f, 0.5f, 0.05f},
                                                            {0.17f, 0.63f, 0.17f},
                                                            {0.84f, 0.15f, 0.16f},
                                                            {0.58f, 0.4f, 0.74f},
                                                            {0.55f, 0.34f, 0.29f}}};
  RasterImage img(kWidth, kHeight, 1.0f);
  draw_line(img, kMargin, kHeight - kMargin, kWidth - kMargin, kHeight - kMargin, {0, 0, 0});
  draw_line(img, kMargin, kMargin, kMargin, kHeight - kMargin, {0, 0, 0});

  std::vector<std::string> methods;
  double hi = 0.0;
  for (const CurvePoint& p : points) {
    if (p.metric != metric) continue;
    if (std::find(methods.begin(), methods.end(), p.method) == methods.end()) {
      methods.push_back(p.method);
    }
    if (p.value) hi = std::max(hi, *p.value);
  }
  if (hi <= 0.0) hi = 1.0;
  const double span_x = labels.size() > 1 ? static_cast<double>(labels.size() - 1) : 1.0;
  auto px = [&](std::size_t i) { return kMargin + (kWidth - 2.0 * kMargin) * i / span_x; };
  auto py = [&](double v) { return kHeight - kMargin - (kHeight - 2.0 * kMargin) * v / hi; };
  for (std::size_t m = 0; m < methods.size(); ++m) {
    std::vector<std::optional<double>> ys(labels.size());
    for (const CurvePoint& p : points) {
      if (p.metric != metric || p.method != methods[m]) continue;
      const auto it = std::find(labels.begin(), labels.end(), p.set_label);
      if (it != labels.end()) ys[static_cast<std::size_t>(it - labels.begin())] = p.value;
    }
    const auto& color = kPalette[m % kPalette.size()];
    for (std::size_t i = 0; i + 1 < ys.size(); ++i) {
      if (ys[i] && ys[i + 1]) draw_line(img, px(i), py(*ys[i]), px(i + 1), py(*ys[i + 1]), color);
    }
  }
  write_image_png(path, img);
}

}  // namespace alphakit
