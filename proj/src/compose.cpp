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

#include "alphakit/compose.hpp"

#include <algorithm>
#include <cmath>

namespace alphakit {

std::size_t Trimap::count(TrimapLabel label) const {
  return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), label));
}

void SamplePair::check_shapes() const {
  require_same_shape(fg, bg, "sample fg/bg");
  require_same_shape(fg, alpha, "sample fg/alpha");
  if (composite) require_same_shape(fg, *composite, "sample fg/composite");
}

RasterImage composite(const RasterImage& fg, const RasterImage& bg,
                      const AlphaMatte& alpha) {
  require_same_shape(fg, bg, "composite");
  require_same_shape(fg, alpha, "composite");
  RasterImage out(fg.width(), fg.height());
  const auto f = fg.values();
  const auto b = bg.values();
  const auto a = alpha.values();
  auto o = out.values();
  for (std::size_t i = 0; i < a.size(); ++i) {
    const float w = a[i];
    const float inv = 1.0f - w;
    for (std::size_t c = 0; c < 3; ++c) {
      o[i * 3 + c] = w * f[i * 3 + c] + inv * b[i * 3 + c];
    }
  }
  return out;
}

double composition_residual(const RasterImage& image, const RasterImage& fg,
                            const RasterImage& bg, const AlphaMatte& alpha) {
  require_same_shape(image, fg, "composition_residual");
  require_same_shape(image, bg, "composition_residual");
  require_same_shape(image, alpha, "composition_residual");
  const auto im = image.values();
  const auto f = fg.values();
  const auto b = bg.values();
  const auto a = alpha.values();
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double w = a[i];
    for (std::size_t c = 0; c < 3; ++c) {
      const double model = w * f[i * 3 + c] + (1.0 - w) * b[i * 3 + c];
      worst = std::max(worst, std::fabs(im[i * 3 + c] - model));
    }
  }
  return worst;
}

namespace {

template <int C>
Raster<C> clamp_raster(const Raster<C>& in) {
  Raster<C> out = in;
  for (float& v : out.values()) v = std::clamp(v, 0.0f, 1.0f);
  return out;
}

}  // namespace

RasterImage clamp_for_export(const RasterImage& image) { return clamp_raster(image); }
AlphaMatte clamp_for_export(const AlphaMatte& alpha) { return clamp_raster(alpha); }

}  // namespace alphakit
