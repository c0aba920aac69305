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
#include <vector>

namespace alphakit {

struct JpegImage {
  int width = 0;
  int height = 0;
  int components = 0;  // 1 (grey) or 3 (RGB)
  std::vector<std::uint8_t> pixels;
};

/// Baseline JFIF encode of interleaved 8-bit samples. Quality is 1..100.
/// Uses the integer DCT so output is identical across builds of libjpeg.
std::vector<std::uint8_t> encode_jpeg(const JpegImage& image, int quality);

/// Decodes to the stored component count (1 or 3).
JpegImage decode_jpeg(std::span<const std::uint8_t> bytes);

}  // namespace alphakit
