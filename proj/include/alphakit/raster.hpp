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
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace alphakit {

/// Raised for any input that violates an operation's preconditions
/// (shape mismatch, out-of-range parameter, malformed file).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Dense row-major float raster with interleaved channels.
///
/// Values are not clamped; augmentation chains may leave the nominal
/// [0,1] range and only export clamps.
template <int Channels>
class Raster {
 public:
  static constexpr int kChannels = Channels;

  Raster() = default;
  Raster(int width, int height, float fill = 0.0f)
      : width_(width), height_(height) {
    if (width < 0 || height < 0) {
      throw InputError("raster dimensions must be non-negative");
    }
    data_.assign(static_cast<std::size_t>(width) * height * Channels, fill);
  }

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width_) * height_;
  }
  bool empty() const { return data_.empty(); }

  float& at(int x, int y, int c = 0) {
    return data_[(static_cast<std::size_t>(y) * width_ + x) * Channels + c];
  }
  float at(int x, int y, int c = 0) const {
    return data_[(static_cast<std::size_t>(y) * width_ + x) * Channels + c];
  }

  std::span<float> values() { return data_; }
  std::span<const float> values() const { return data_; }
  std::vector<float>& storage() { return data_; }

  template <int Other>
  bool same_shape(const Raster<Other>& other) const {
    return width_ == other.width() && height_ == other.height();
  }

  bool operator==(const Raster&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<float> data_;
};

/// 3-channel colour raster (F, B or the observed image I).
using RasterImage = Raster<3>;

/// Single-channel opacity raster; values in [0,1].
using AlphaMatte = Raster<1>;

enum class TrimapLabel : std::uint8_t {
  kBackground = 0,
  kUnknown = 128,
  kForeground = 255,
};

class Trimap {
 public:
  Trimap() = default;
  Trimap(int width, int height, TrimapLabel fill = TrimapLabel::kUnknown)
      : width_(width), height_(height),
        labels_(static_cast<std::size_t>(width) * height, fill) {}

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t pixel_count() const { return labels_.size(); }

  TrimapLabel& at(int x, int y) {
    return labels_[static_cast<std::size_t>(y) * width_ + x];
  }
  TrimapLabel at(int x, int y) const {
    return labels_[static_cast<std::size_t>(y) * width_ + x];
  }
  std::span<TrimapLabel> labels() { return labels_; }
  std::span<const TrimapLabel> labels() const { return labels_; }

  std::size_t count(TrimapLabel label) const;

  template <int C>
  bool same_shape(const Raster<C>& other) const {
    return width_ == other.width() && height_ == other.height();
  }

  bool operator==(const Trimap&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<TrimapLabel> labels_;
};

/// Foreground, background and matte of one training sample, plus the
/// observed image once it has been composited.
struct SamplePair {
  RasterImage fg;
  RasterImage bg;
  AlphaMatte alpha;
  std::optional<RasterImage> composite;

  /// Throws InputError unless fg, bg and alpha share dimensions.
  void check_shapes() const;
};

/// Throws InputError naming `what` if the two rasters differ in size.
template <typename A, typename B>
void require_same_shape(const A& a, const B& b, const char* what) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw InputError(std::string(what) + ": dimension mismatch (" +
                     std::to_string(a.width()) + "x" +
                     std::to_string(a.height()) + " vs " +
                     std::to_string(b.width()) + "x" +
                     std::to_string(b.height()) + ")");
  }
}

}  // namespace alphakit
