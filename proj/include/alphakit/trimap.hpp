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

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "alphakit/raster.hpp"
#include "alphakit/rng.hpp"

namespace alphakit {

/// Tolerance for "pure" foreground/background, one 8-bit code.
inline constexpr float kPureAlphaEpsilon = 1.0f / 255.0f;

/// Morphological erosion of a binary mask by the discrete disk
/// {(dx,dy) : dx^2 + dy^2 <= radius^2}. Pixels outside the raster do not
/// erode (a full mask stays full). Runs in O(width * height) via an exact
/// squared Euclidean distance transform.
std::vector<std::uint8_t> erode_disk(std::span<const std::uint8_t> mask, int width,
                                     int height, int radius);

/// FG = pixels with alpha >= 1 - eps surviving erosion by radius `radius`;
/// BG likewise for alpha <= eps; everything else UNKNOWN.
Trimap generate_trimap(const AlphaMatte& alpha, int radius);

/// As above with the radius drawn uniformly from [min_radius, max_radius].
Trimap generate_trimap(const AlphaMatte& alpha, Rng& rng, int min_radius, int max_radius,
                       int* drawn_radius = nullptr);

struct SweepRange {
  std::string label;
  int min_radius = 0;
  int max_radius = 0;
};

/// The four robustness sets: "20" [11,20], "30" [21,30], "40" [31,40],
/// "50" [41,50].
std::vector<SweepRange> default_sweep_ranges();

struct SweepTrimap {
  std::string label;
  int radius = 0;
  Trimap trimap;
};

/// One trimap per range, radius drawn uniformly from each range in order.
std::vector<SweepTrimap> sweep_sets(const AlphaMatte& alpha, Rng& rng,
                                    std::span<const SweepRange> ranges);
std::vector<SweepTrimap> sweep_sets(const AlphaMatte& alpha, Rng& rng);

}  // namespace alphakit
