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

#include "alphakit/raster.hpp"

namespace alphakit {

/// I = alpha * F + (1 - alpha) * B per pixel and channel, unclamped.
RasterImage composite(const RasterImage& fg, const RasterImage& bg,
                      const AlphaMatte& alpha);

/// Max over pixels/channels of |image - (alpha * F + (1 - alpha) * B)|.
double composition_residual(const RasterImage& image, const RasterImage& fg,
                            const RasterImage& bg, const AlphaMatte& alpha);

/// Clips every value to [0,1]. Only used at export.
RasterImage clamp_for_export(const RasterImage& image);
AlphaMatte clamp_for_export(const AlphaMatte& alpha);

}  // namespace alphakit
