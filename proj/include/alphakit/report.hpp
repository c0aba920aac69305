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

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace alphakit {

/// Header of the per-image evaluation CSV.
inline constexpr const char* kEvalCsvHeader = "image_id,sad,mse,grad,conn,unknown_px";
/// Header of the long-format sweep CSV.
inline constexpr const char* kSweepCsvHeader = "method,set_label,metric,value";

/// Metric names in report order.
const std::vector<std::string>& metric_names();

struct ComparisonRow {
  std::string label;
  std::optional<double> sad;
  std::optional<double> mse;
  std::optional<double> grad;
  std::optional<double> conn;
};

/// Rows sorted by ascending SAD; undefined SAD sorts last, ties by label.
struct ComparisonTable {
  std::vector<ComparisonRow> rows;

  std::string to_markdown() const;
  std::string to_csv() const;
};

/// One row per label from each eval CSV's MEAN row. Throws InputError for a
/// label/path count mismatch, a duplicate label, a schema mismatch or a
/// missing MEAN row, naming the offending file.
ComparisonTable merge_reports(const std::vector<std::filesystem::path>& csv_paths,
                              const std::vector<std::string>& labels);

struct CurvePoint {
  std::string method;
  std::string set_label;
  std::string metric;
  std::optional<double> value;
};

/// Concatenates sweep CSVs into method x set_label x metric rows, values
/// passed through. Every (method, metric) must carry each of
/// `expected_labels` exactly once; a missing label is rejected.
std::vector<CurvePoint> robustness_table(const std::vector<std::filesystem::path>& sweep_csvs,
                                         const std::vector<std::string>& expected_labels = {
                                             "20", "30", "40", "50"});

std::string curves_csv(const std::vector<CurvePoint>& points);

/// Renders one line per method for `metric` over the set labels (in
/// `labels` order) into an 8-bit RGB PNG. Axes only, no text.
void write_curve_plot(const std::filesystem::path& path, const std::vector<CurvePoint>& points,
                      const std::string& metric, const std::vector<std::string>& labels);

}  // namespace alphakit
