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

#include "alphakit/augment.hpp"

#include <algorithm>
#include <cmath>

#include "alphakit/color.hpp"
#include "alphakit/filters.hpp"
#include "alphakit/image_io.hpp"
#include "alphakit/jpeg_codec.hpp"

namespace alphakit {
namespace {

struct KindInfo {
  OpKind kind;
  std::string_view name;
  Category category;
  ParamRange range;
};

// Ranges are plausibility defaults; every one is overridable per run.
constexpr std::array<KindInfo, 16> kKinds{{
    {OpKind::kLinearContrast, "linear_contrast", Category::kLinearPixelwise, {0.5, 1.5}},
    {OpKind::kBrightness, "brightness", Category::kLinearPixelwise, {-0.2, 0.2}},
    {OpKind::kChannelInversion, "channel_inversion", Category::kLinearPixelwise, {0.0, 0.0}},
    {OpKind::kChannelShuffle, "channel_shuffle", Category::kLinearPixelwise, {0.0, 0.0}},
    {OpKind::kGaussianNoise, "gaussian_noise", Category::kLinearPixelwise, {0.0, 0.1}},
    {OpKind::kPoissonNoise, "poisson_noise", Category::kLinearPixelwise, {20.0, 120.0}},
    {OpKind::kRandomDropout, "random_dropout", Category::kLinearPixelwise, {0.0, 0.05}},
    {OpKind::kCloudOverlay, "cloud_overlay", Category::kLinearPixelwise, {0.1, 0.4}},
    {OpKind::kSnowOverlay, "snow_overlay", Category::kLinearPixelwise, {0.002, 0.02}},
    {OpKind::kMultiply, "multiply", Category::kLinearPixelwise, {0.7, 1.3}},
    {OpKind::kSaltAndPepper, "salt_and_pepper", Category::kLinearPixelwise, {0.0, 0.02}},
    {OpKind::kGammaContrast, "gamma_contrast", Category::kNonlinearPixelwise, {0.5, 2.0}},
    {OpKind::kHueSaturationAdd, "hue_saturation_add", Category::kNonlinearPixelwise, {-0.1, 0.1}},
    {OpKind::kHistogramEqualization, "histogram_equalization", Category::kNonlinearPixelwise, {0.0, 0.0}},
    {OpKind::kGaussianBlur, "gaussian_blur", Category::kRegionWise, {0.5, 3.0}},
    {OpKind::kJpegCompression, "jpeg_compression", Category::kRegionWise, {40.0, 95.0}},
}};

const KindInfo& info(OpKind kind) {
  return kKinds[static_cast<std::size_t>(kind)];
}

constexpr std::array<std::string_view, 3> kCategoryNames{
    "linear_pixelwise", "nonlinear_pixelwise", "region_wise"};

LinearPixelwiseParams identity_params(int w, int h) {
  return {RasterImage(w, h, 1.0f), RasterImage(w, h, 0.0f), {0, 1, 2}};
}

// Smooth value noise in [0,1]: two octaves of a bilinearly blended random
// lattice.
std::vector<float> value_noise(Rng& rng, int w, int h) {
  std::vector<float> field(static_cast<std::size_t>(w) * h, 0.0f);
  const int base_cell = std::max(8, std::min(w, h) / 4);
  const std::array<std::pair<int, float>, 2> octaves{{{base_cell, 0.65f},
                                                      {std::max(4, base_cell / 2), 0.35f}}};
  for (const auto& [cell, weight] : octaves) {
    const int gw = w / cell + 2;
    const int gh = h / cell + 2;
    std::vector<float> lattice(static_cast<std::size_t>(gw) * gh);
    for (float& v : lattice) v = static_cast<float>(rng.uniform());
    for (int y = 0; y < h; ++y) {
      const float gy = static_cast<float>(y) / cell;
      const int y0 = static_cast<int>(gy);
      float ty = gy - y0;
      ty = ty * ty * (3.0f - 2.0f * ty);
      for (int x = 0; x < w; ++x) {
        const float gx = static_cast<float>(x) / cell;
        const int x0 = static_cast<int>(gx);
        float tx = gx - x0;
        tx = tx * tx * (3.0f - 2.0f * tx);
        const float v00 = lattice[static_cast<std::size_t>(y0) * gw + x0];
        const float v10 = lattice[static_cast<std::size_t>(y0) * gw + x0 + 1];
        const float v01 = lattice[static_cast<std::size_t>(y0 + 1) * gw + x0];
        const float v11 = lattice[static_cast<std::size_t>(y0 + 1) * gw + x0 + 1];
        const float top = v00 + tx * (v10 - v00);
        const float bot = v01 + tx * (v11 - v01);
        field[static_cast<std::size_t>(y) * w + x] += weight * (top + ty * (bot - top));
      }
    }
  }
  return field;
}

LinearPixelwiseParams realize_linear(OpKind kind, double value, Rng& rng, int w, int h,
                                     const RasterImage* reference,
                                     std::vector<double>& values) {
  LinearPixelwiseParams p = identity_params(w, h);
  auto gain = p.gain.values();
  auto offset = p.offset.values();
  const std::size_t n = static_cast<std::size_t>(w) * h;
  switch (kind) {
    case OpKind::kLinearContrast:
      // Contrast about mid-grey: a * (x - 0.5) + 0.5.
      values.push_back(value);
      std::fill(gain.begin(), gain.end(), static_cast<float>(value));
      std::fill(offset.begin(), offset.end(), static_cast<float>(0.5 * (1.0 - value)));
      break;
    case OpKind::kBrightness:
      values.push_back(value);
      std::fill(offset.begin(), offset.end(), static_cast<float>(value));
      break;
    case OpKind::kChannelInversion:
      std::fill(gain.begin(), gain.end(), -1.0f);
      std::fill(offset.begin(), offset.end(), 1.0f);
      break;
    case OpKind::kChannelShuffle: {
      // One of the five non-identity permutations.
      static constexpr std::array<std::array<int, 3>, 5> kPerms{
          {{0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
      p.channel_perm = kPerms[static_cast<std::size_t>(rng.uniform_int(0, 4))];
      for (int c : p.channel_perm) values.push_back(c);
      break;
    }
    case OpKind::kGaussianNoise:
      values.push_back(value);
      for (float& b : offset) b = static_cast<float>(rng.normal() * value);
      break;
    case OpKind::kPoissonNoise: {
      // Shot noise at photon scale `value`, frozen as an additive field.
      if (!(value > 0.0)) throw InputError("poisson_noise: photon scale must be positive");
      values.push_back(value);
      for (std::size_t i = 0; i < offset.size(); ++i) {
        const double signal =
            reference ? std::clamp(static_cast<double>(reference->values()[i]), 0.0, 1.0) : 0.5;
        const double mean = value * signal;
        offset[i] = static_cast<float>((static_cast<double>(rng.poisson(mean)) - mean) / value);
      }
      break;
    }
    case OpKind::kRandomDropout:
      values.push_back(value);
      for (std::size_t i = 0; i < n; ++i) {
        if (rng.bernoulli(value)) {
          for (int c = 0; c < 3; ++c) gain[i * 3 + c] = 0.0f;
        }
      }
      break;
    case OpKind::kCloudOverlay: {
      values.push_back(value);
      const std::vector<float> field = value_noise(rng, w, h);
      for (std::size_t i = 0; i < n; ++i) {
        for (int c = 0; c < 3; ++c) offset[i * 3 + c] = static_cast<float>(value) * field[i];
      }
      break;
    }
    case OpKind::kSnowOverlay:
      values.push_back(value);
      for (std::size_t i = 0; i < n; ++i) {
        if (rng.bernoulli(value)) {
          const float flake = static_cast<float>(rng.uniform(0.5, 1.0));
          for (int c = 0; c < 3; ++c) offset[i * 3 + c] = flake;
        }
      }
      break;
    case OpKind::kMultiply:
      values.push_back(value);
      std::fill(gain.begin(), gain.end(), static_cast<float>(value));
      break;
    case OpKind::kSaltAndPepper:
      values.push_back(value);
      for (std::size_t i = 0; i < n; ++i) {
        if (rng.bernoulli(value)) {
          const float level = rng.bernoulli(0.5) ? 1.0f : 0.0f;
          for (int c = 0; c < 3; ++c) {
            gain[i * 3 + c] = 0.0f;
            offset[i * 3 + c] = level;
          }
        }
      }
      break;
    default:
      throw InputError("realize_linear: not a linear pixel-wise kind");
  }
  return p;
}

RasterImage gamma_contrast(const RasterImage& image, double gamma) {
  RasterImage out = image;
  const float g = static_cast<float>(gamma);
  for (float& v : out.values()) v = std::copysign(std::pow(std::fabs(v), g), v);
  return out;
}

RasterImage hue_saturation_add(const RasterImage& image, double dh, double ds) {
  RasterImage out = image;
  auto v = out.values();
  for (std::size_t i = 0; i < out.pixel_count(); ++i) {
    auto hsv = rgb_to_hsv(v[i * 3], v[i * 3 + 1], v[i * 3 + 2]);
    if (hsv[2] <= 0.0f) continue;
    hsv[0] += static_cast<float>(dh);
    hsv[1] = std::clamp(hsv[1] + static_cast<float>(ds), 0.0f, 1.0f);
    const auto rgb = hsv_to_rgb(hsv[0], hsv[1], hsv[2]);
    for (int c = 0; c < 3; ++c) v[i * 3 + c] = rgb[c];
  }
  return out;
}

// Per-channel CDF equalisation over 256 bins of the clamped image.
RasterImage histogram_equalization(const RasterImage& image) {
  RasterImage out = image;
  const std::size_t n = image.pixel_count();
  if (n == 0) return out;
  auto v = out.values();
  for (int c = 0; c < 3; ++c) {
    std::array<std::size_t, 256> hist{};
    for (std::size_t i = 0; i < n; ++i) ++hist[quantize(v[i * 3 + c], 255)];
    std::array<std::size_t, 256> cdf{};
    std::size_t running = 0;
    for (int k = 0; k < 256; ++k) cdf[k] = running += hist[k];
    std::size_t cdf_min = 0;
    for (int k = 0; k < 256; ++k) {
      if (hist[k] != 0) {
        cdf_min = cdf[k];
        break;
      }
    }
    const std::size_t denom = n - cdf_min;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t code = quantize(v[i * 3 + c], 255);
      v[i * 3 + c] = denom == 0 ? v[i * 3 + c]
                                : static_cast<float>(static_cast<double>(cdf[code] - cdf_min) / denom);
    }
  }
  return out;
}

template <int C>
Raster<C> jpeg_round_trip(const Raster<C>& in, int quality) {
  JpegImage img{in.width(), in.height(), C, {}};
  img.pixels.resize(in.values().size());
  std::transform(in.values().begin(), in.values().end(), img.pixels.begin(),
                 [](float v) { return static_cast<std::uint8_t>(quantize(v, 255)); });
  const JpegImage decoded = decode_jpeg(encode_jpeg(img, quality));
  Raster<C> out(in.width(), in.height());
  std::transform(decoded.pixels.begin(), decoded.pixels.end(), out.values().begin(),
                 [](std::uint8_t b) { return static_cast<float>(b) / 255.0f; });
  return out;
}

void require_realized_for(const AugmentationOp& op, int w, int h) {
  const Realization& r = op.realization();
  if (r.width != w || r.height != h) {
    throw InputError("apply: op realised for " + std::to_string(r.width) + "x" +
                     std::to_string(r.height) + " but raster is " + std::to_string(w) +
                     "x" + std::to_string(h));
  }
}

}  // namespace

std::string_view to_string(Category category) {
  return kCategoryNames[static_cast<std::size_t>(category)];
}

std::string_view to_string(OpKind kind) { return info(kind).name; }

std::optional<Category> category_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kCategoryNames.size(); ++i) {
    if (kCategoryNames[i] == name) return static_cast<Category>(i);
  }
  return std::nullopt;
}

std::optional<OpKind> op_kind_from_string(std::string_view name) {
  for (const KindInfo& k : kKinds) {
    if (k.name == name) return k.kind;
  }
  return std::nullopt;
}

Category category_of(OpKind kind) { return info(kind).category; }

const std::map<Category, std::vector<OpKind>>& registry() {
  static const std::map<Category, std::vector<OpKind>> table = [] {
    std::map<Category, std::vector<OpKind>> t;
    for (const KindInfo& k : kKinds) t[k.category].push_back(k.kind);
    return t;
  }();
  return table;
}

ParamRange default_range(OpKind kind) { return info(kind).range; }

ParamRange AugmentRanges::get(OpKind kind) const {
  const auto it = overrides.find(kind);
  return it == overrides.end() ? default_range(kind) : it->second;
}

AugmentationOp::AugmentationOp(OpKind kind) : AugmentationOp(kind, default_range(kind)) {}

AugmentationOp::AugmentationOp(OpKind kind, ParamRange range) : kind_(kind), range_(range) {
  if (!(range.lo <= range.hi)) {
    throw InputError(std::string("invalid parameter range for ") + std::string(to_string(kind)));
  }
}

const Realization& AugmentationOp::realization() const {
  if (!realization_) {
    throw InputError(std::string("op '") + std::string(to_string(kind_)) + "' is not realised");
  }
  return *realization_;
}

AugmentationOp realize(const AugmentationOp& op, Rng& rng, int width, int height,
                       const RasterImage* reference) {
  if (op.realized()) throw InputError("realize: op is already realised");
  if (width <= 0 || height <= 0) throw InputError("realize: dimensions must be positive");
  if (reference && (reference->width() != width || reference->height() != height)) {
    throw InputError("realize: reference raster does not match dimensions");
  }
  const double value = op.range_.lo == op.range_.hi ? op.range_.lo
                                                    : rng.uniform(op.range_.lo, op.range_.hi);
  Realization r;
  r.width = width;
  r.height = height;
  switch (op.category()) {
    case Category::kLinearPixelwise:
      r.linear = realize_linear(op.kind_, value, rng, width, height, reference, r.values);
      break;
    case Category::kNonlinearPixelwise:
      if (op.kind_ == OpKind::kGammaContrast) {
        if (!(value > 0.0)) throw InputError("gamma_contrast: gamma must be positive");
        r.values = {value};
      } else if (op.kind_ == OpKind::kHueSaturationAdd) {
        const double ds = op.range_.lo == op.range_.hi ? op.range_.lo
                                                       : rng.uniform(op.range_.lo, op.range_.hi);
        r.values = {value, ds};
      }
      break;
    case Category::kRegionWise:
      if (op.kind_ == OpKind::kGaussianBlur) {
        if (!(value > 0.0)) throw InputError("gaussian_blur: sigma must be positive");
        r.values = {value};
        r.blur_kernel = gaussian_kernel(value);
      } else {
        const auto lo = static_cast<std::int64_t>(std::ceil(op.range_.lo));
        const auto hi = static_cast<std::int64_t>(std::floor(op.range_.hi));
        if (lo < 1 || hi > 100 || lo > hi) {
          throw InputError("jpeg_compression: quality range must lie within [1,100]");
        }
        r.jpeg_quality = static_cast<int>(rng.uniform_int(lo, hi));
        r.values = {static_cast<double>(r.jpeg_quality)};
      }
      break;
  }
  AugmentationOp out = op;
  out.realization_ = std::move(r);
  return out;
}

RasterImage apply_linear(const LinearPixelwiseParams& params, const RasterImage& image) {
  require_same_shape(params.gain, image, "apply_linear");
  require_same_shape(params.offset, image, "apply_linear");
  RasterImage out(image.width(), image.height());
  const auto x = image.values();
  const auto a = params.gain.values();
  const auto b = params.offset.values();
  auto y = out.values();
  const auto& perm = params.channel_perm;
  for (std::size_t i = 0; i < image.pixel_count(); ++i) {
    const std::size_t base = i * 3;
    for (int c = 0; c < 3; ++c) {
      const std::size_t src = base + static_cast<std::size_t>(perm[c]);
      y[base + c] = a[src] * x[src] + b[src];
    }
  }
  return out;
}

RasterImage apply(const AugmentationOp& op, const RasterImage& image) {
  require_realized_for(op, image.width(), image.height());
  const Realization& r = op.realization();
  switch (op.kind()) {
    case OpKind::kGammaContrast:
      return gamma_contrast(image, r.values.at(0));
    case OpKind::kHueSaturationAdd:
      return hue_saturation_add(image, r.values.at(0), r.values.at(1));
    case OpKind::kHistogramEqualization:
      return histogram_equalization(image);
    case OpKind::kGaussianBlur:
      return convolve_separable(image, r.blur_kernel);
    case OpKind::kJpegCompression:
      return jpeg_round_trip(image, r.jpeg_quality);
    default:
      return apply_linear(*r.linear, image);
  }
}

AlphaMatte apply_to_alpha(const AugmentationOp& op, const AlphaMatte& alpha) {
  if (op.category() != Category::kRegionWise) {
    throw InputError(std::string("apply_to_alpha: '") + std::string(to_string(op.kind())) +
                     "' is pixel-wise; the ground truth must stay unmodified");
  }
  require_realized_for(op, alpha.width(), alpha.height());
  const Realization& r = op.realization();
  AlphaMatte out = op.kind() == OpKind::kGaussianBlur ? convolve_separable(alpha, r.blur_kernel)
                                                      : jpeg_round_trip(alpha, r.jpeg_quality);
  for (float& v : out.values()) v = std::clamp(v, 0.0f, 1.0f);
  return out;
}

}  // namespace alphakit
