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

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "alphakit/raster.hpp"

namespace alphakit {

/// Which pixels a metric sums over.
enum class MetricRegion { kUnknown, kWholeImage };

struct MetricConstants {
  double grad_sigma = 1.4;
  double grad_power = 2.0;
  double conn_step = 0.1;
  double conn_theta = 0.15;
  int connectivity = 4;  // 4 or 8
  MetricRegion region = MetricRegion::kUnknown;
};

/// Errors of one prediction. A field is empty when the metric is undefined
/// for the input (empty region, no fully-opaque source for Conn).
struct MetricReport {
  std::optional<double> sad;   // sum |pred - gt| / 1000
  std::optional<double> mse;   // mean (pred - gt)^2
  std::optional<double> grad;  // sum |g_pred - g_gt|^q / 1000
  std::optional<double> conn;  // sum |phi_pred - phi_gt| / 1000
  std::size_t unknown_px = 0;
};

std::optional<double> sad(const AlphaMatte& pred, const AlphaMatte& gt, const Trimap& tri,
                          MetricRegion region = MetricRegion::kUnknown);
std::optional<double> mse(const AlphaMatte& pred, const AlphaMatte& gt, const Trimap& tri,
                          MetricRegion region = MetricRegion::kUnknown);

/// Radius of the Gaussian-derivative kernels, ceil(3 sigma).
int gradient_kernel_radius(double sigma);

/// x and y gradient magnitude of `alpha` under first-order Gaussian
/// derivative filters at scale sigma, replicate borders. The derivative
/// taps are normalised so a unit ramp has unit gradient.
std::vector<double> gradient_magnitude(const AlphaMatte& alpha, double sigma);

/// Throws InputError when sigma <= 0 or either dimension is not larger
/// than the kernel radius.
std::optional<double> grad_error(const AlphaMatte& pred, const AlphaMatte& gt,
                                 const Trimap& tri, double sigma = 1.4, double power = 2.0,
                                 MetricRegion region = MetricRegion::kUnknown);

/// Connectivity error. The source region is the largest connected set where
/// both mattes are fully opaque; each pixel's level is the highest threshold
/// on the grid {0, step, 2 step, ...} ∪ {1} at which it stays connected to
/// the source in the jointly thresholded map.
std::optional<double> conn_error(const AlphaMatte& pred, const AlphaMatte& gt,
                                 const Trimap& tri, double step = 0.1, double theta = 0.15,
                                 int connectivity = 4,
                                 MetricRegion region = MetricRegion::kUnknown);

/// All four metrics. Throws InputError on shape mismatch.
MetricReport evaluate(const AlphaMatte& pred, const AlphaMatte& gt, const Trimap& tri,
                      const MetricConstants& constants = {});

struct ImageEvaluation {
  std::string image_id;
  std::optional<MetricReport> report;
  std::string error;  // set when the triple could not be evaluated
};

struct SetEvaluation {
  std::vector<ImageEvaluation> images;  // sorted by image_id
  MetricReport mean;                    // unweighted over evaluated images
  std::vector<std::string> missing;     // stems lacking a gt or trimap file
};

/// Evaluates every prediction in pred_dir against gt_dir/tri_dir, matched
/// by file stem. Per-image failures (unreadable files, size mismatch) are
/// recorded and the run continues.
SetEvaluation evaluate_set(const std::filesystem::path& pred_dir,
                           const std::filesystem::path& gt_dir,
                           const std::filesystem::path& tri_dir,
                           const MetricConstants& constants = {}, int workers = 1);

/// Unweighted mean of the defined values of each field.
MetricReport mean_report(const std::vector<ImageEvaluation>& images);

/// CSV with header image_id,sad,mse,grad,conn,unknown_px, one row per
/// evaluated image and a final MEAN row. Undefined values print as "nan".
std::string report_csv(const SetEvaluation& evaluation);

/// Image files (png/jpg/jpeg) in `dir`, keyed by stem, sorted.
std::vector<std::pair<std::string, std::filesystem::path>> list_images(
    const std::filesystem::path& dir);

}  // namespace alphakit
