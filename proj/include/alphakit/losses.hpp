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
#include <optional>
#include <vector>

#include "alphakit/raster.hpp"

namespace alphakit {

/// Pixels a loss is averaged over.
class RegionMask {
 public:
  static RegionMask whole(int width, int height);
  static RegionMask unknown(const Trimap& trimap);

  int width() const { return width_; }
  int height() const { return height_; }
  bool contains(std::size_t i) const { return mask_[i] != 0; }
  std::size_t size() const { return count_; }

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> mask_;
  std::size_t count_ = 0;
};

enum class LossRegion { kUnknownOnly, kWholeImage };

struct LossConfig {
  double lambda = 0.01;  // gradient-penalty weight
  int laplacian_levels = 5;
  LossRegion region = LossRegion::kUnknownOnly;

  void validate() const;
};

/// Mean |pred - gt| over the region. Throws InputError if it is empty.
double l1_alpha(const AlphaMatte& pred, const AlphaMatte& gt, const RegionMask& region);

/// Mean over region pixels and channels of |I - (pred F + (1 - pred) B)|.
double composition_loss(const AlphaMatte& pred, const RasterImage& image, const RasterImage& fg,
                        const RasterImage& bg, const RegionMask& region);

/// sum_k 2^(k-1) * mean |Lap_k(pred) - Lap_k(gt)| where Lap_k (k = 1 is the
/// finest) is a band of a Laplacian pyramid built with the 5-tap binomial
/// kernel, reflect-101 borders, decimation by 2 and zero-insertion
/// upsampling. Both sides need at least 2^levels pixels along each axis.
double laplacian_loss(const AlphaMatte& pred, const AlphaMatte& gt, int levels = 5);

/// Anisotropic total variation with forward differences:
/// sum |a(x+1,y) - a(x,y)| + sum |a(x,y+1) - a(x,y)|.
double total_variation(const AlphaMatte& alpha);

/// ||dx pred - dx gt||_1 + ||dy pred - dy gt||_1, forward differences, summed.
double gradient_loss(const AlphaMatte& pred, const AlphaMatte& gt);

/// gradient_loss + lambda * total_variation(pred).
double gradient_penalty_loss(const AlphaMatte& pred, const AlphaMatte& gt, double lambda = 0.01);

}  // namespace alphakit
