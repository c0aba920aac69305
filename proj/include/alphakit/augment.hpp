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

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "alphakit/raster.hpp"
#include "alphakit/rng.hpp"

namespace alphakit {

/// How an augmentation interacts with the composition equation.
enum class Category {
  kLinearPixelwise,     // per-pixel affine, commutes with compositing
  kNonlinearPixelwise,  // per-pixel curve, breaks it when applied to I
  kRegionWise,          // mixes neighbouring pixels, breaks it as well
};

enum class OpKind {
  kLinearContrast,
  kBrightness,
  kChannelInversion,
  kChannelShuffle,
  kGaussianNoise,
  kPoissonNoise,
  kRandomDropout,
  kCloudOverlay,
  kSnowOverlay,
  kMultiply,
  kSaltAndPepper,
  kGammaContrast,
  kHueSaturationAdd,
  kHistogramEqualization,
  kGaussianBlur,
  kJpegCompression,
};

std::string_view to_string(Category category);
std::string_view to_string(OpKind kind);
std::optional<Category> category_from_string(std::string_view name);
std::optional<OpKind> op_kind_from_string(std::string_view name);
Category category_of(OpKind kind);

/// Every op kind, grouped by category.
const std::map<Category, std::vector<OpKind>>& registry();

/// Closed interval a scalar parameter is drawn from; lo == hi pins it.
struct ParamRange {
  double lo = 0.0;
  double hi = 0.0;
  bool operator==(const ParamRange&) const = default;
};

/// Default draw range of each kind's main parameter. Kinds without a
/// parameter (inversion, shuffle, equalisation) return {0, 0}.
ParamRange default_range(OpKind kind);

/// Per-kind overrides of the default parameter ranges.
struct AugmentRanges {
  std::map<OpKind, ParamRange> overrides;
  ParamRange get(OpKind kind) const;
};

/// Realised form of a linear pixel-wise op: out_c = gain_p(c) * x_p(c) +
/// offset_p(c), where p is `channel_perm`.
struct LinearPixelwiseParams {
  RasterImage gain;
  RasterImage offset;
  std::array<int, 3> channel_perm{0, 1, 2};
};

/// Randomness frozen by realize().
struct Realization {
  int width = 0;
  int height = 0;
  /// Scalars drawn for the op, in a fixed per-kind order; recorded for replay.
  std::vector<double> values;
  std::optional<LinearPixelwiseParams> linear;
  std::vector<float> blur_kernel;
  int jpeg_quality = 0;
};

class AugmentationOp {
 public:
  explicit AugmentationOp(OpKind kind);
  AugmentationOp(OpKind kind, ParamRange range);

  /// Op whose main parameter is pinned to `value`.
  static AugmentationOp fixed(OpKind kind, double value) {
    return AugmentationOp(kind, ParamRange{value, value});
  }

  OpKind kind() const { return kind_; }
  Category category() const { return category_of(kind_); }
  const ParamRange& range() const { return range_; }

  bool realized() const { return realization_.has_value(); }
  /// Throws InputError when not realised.
  const Realization& realization() const;

 private:
  friend AugmentationOp realize(const AugmentationOp&, Rng&, int, int,
                                const RasterImage*);

  OpKind kind_;
  ParamRange range_;
  std::optional<Realization> realization_;
};

/// Draws all randomness of `op` for a width x height target. `reference`
/// supplies the signal level for signal-dependent noise (Poisson); without
/// it a mid-grey level of 0.5 is assumed.
AugmentationOp realize(const AugmentationOp& op, Rng& rng, int width, int height,
                       const RasterImage* reference = nullptr);

/// Applies a realised op to a colour raster. Output is unclamped except for
/// ops that inherently quantise (JPEG) or equalise.
RasterImage apply(const AugmentationOp& op, const RasterImage& image);

/// Applies the spatial part of a realised region-wise op to a matte; the
/// result is clamped to [0,1]. Pixel-wise ops are rejected since they leave
/// the ground truth untouched.
AlphaMatte apply_to_alpha(const AugmentationOp& op, const AlphaMatte& alpha);

RasterImage apply_linear(const LinearPixelwiseParams& params, const RasterImage& image);

}  // namespace alphakit
