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
#include <vector>

#include "alphakit/raster.hpp"

namespace alphakit {

/// Reflect-101 border index (…2 1 | 0 1 2 … n-1 | n-2 …), valid for any n >= 1.
int reflect101(int i, int n);

/// Sampled Gaussian on [-radius, radius], normalised to unit sum.
/// radius defaults to ceil(3 * sigma).
std::vector<float> gaussian_kernel(double sigma, int radius = -1);

/// Separable correlation with the same 1-D kernel along x then y,
/// reflect-101 borders.
template <int C>
Raster<C> convolve_separable(const Raster<C>& in, const std::vector<float>& kernel);

/// Bilinear resample to the given size (pixel-centre aligned).
template <int C>
Raster<C> resize_bilinear(const Raster<C>& in, int width, int height);

/// 2x3 affine map from output pixel coordinates to input coordinates.
using AffineMatrix = std::array<double, 6>;

/// Inverse-mapped bilinear warp; samples falling outside the input read
/// `fill`.
template <int C>
Raster<C> warp_affine(const Raster<C>& in, const AffineMatrix& out_to_in,
                      int width, int height, float fill = 0.0f);

template <int C>
Raster<C> crop(const Raster<C>& in, int x0, int y0, int width, int height);

}  // namespace alphakit
