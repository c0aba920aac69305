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
#include <filesystem>
#include <vector>

#include "alphakit/raster.hpp"

namespace alphakit {

/// Decoded pixels before conversion to float: interleaved samples stored as
/// 16-bit words regardless of the file's bit depth.
struct PixelBuffer {
  int width = 0;
  int height = 0;
  int channels = 0;
  int bit_depth = 8;
  std::vector<std::uint16_t> samples;

  double max_code() const { return bit_depth == 16 ? 65535.0 : 255.0; }
};

/// Reads PNG (any colour type, 8/16-bit) or baseline JPEG.
PixelBuffer read_pixels(const std::filesystem::path& path);

/// RGB image; grey inputs are replicated, alpha channels dropped. Integer
/// codes map to [0,1] by division by the maximum code.
RasterImage read_image(const std::filesystem::path& path);

/// Alpha matte from a grey PNG (8 or 16-bit). Colour inputs use the first
/// channel.
AlphaMatte read_alpha(const std::filesystem::path& path);

/// Trimap PNG: code 0 is background, 255 foreground, anything else unknown.
Trimap read_trimap(const std::filesystem::path& path);

/// 8-bit RGB PNG; values are clamped to [0,1] and rounded.
void write_image_png(const std::filesystem::path& path, const RasterImage& image);

/// Grey PNG at 8 or 16 bits per sample.
void write_alpha_png(const std::filesystem::path& path, const AlphaMatte& alpha,
                     int bit_depth = 16);

/// 8-bit grey PNG with codes {0,128,255}.
void write_trimap_png(const std::filesystem::path& path, const Trimap& trimap);

/// Nearest integer code of a clamped [0,1] value.
std::uint16_t quantize(float value, int max_code);

/// Inverse of quantize: code / max_code, rounded once to float.
float dequantize(std::uint16_t code, int max_code);

}  // namespace alphakit
