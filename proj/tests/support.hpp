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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>

#include <unistd.h>

#include "alphakit/image_io.hpp"
#include "alphakit/raster.hpp"
#include "alphakit/rng.hpp"

namespace testing {

using namespace alphakit;

inline RasterImage random_image(Rng& rng, int w, int h, double lo = 0.0, double hi = 1.0) {
  RasterImage img(w, h);
  for (float& v : img.values()) v = static_cast<float>(rng.uniform(lo, hi));
  return img;
}

inline RasterImage flat_image(int w, int h, float r, float g, float b) {
  RasterImage img(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      img.at(x, y, 0) = r;
      img.at(x, y, 1) = g;
      img.at(x, y, 2) = b;
    }
  }
  return img;
}

inline AlphaMatte random_alpha(Rng& rng, int w, int h) {
  AlphaMatte a(w, h);
  for (float& v : a.values()) v = static_cast<float>(rng.uniform());
  return a;
}

/// Vertical step: 1 left of column c, 0 from column c on.
inline AlphaMatte step_alpha(int w, int h, int c) {
  AlphaMatte a(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) a.at(x, y) = x < c ? 1.0f : 0.0f;
  }
  return a;
}

/// Disc of opaque pixels with a soft rim of the given width.
inline AlphaMatte disc_alpha(int w, int h, double radius, double rim) {
  AlphaMatte a(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double r = std::hypot(x - (w - 1) / 2.0, y - (h - 1) / 2.0);
      a.at(x, y) = static_cast<float>(std::clamp((radius - r) / rim, 0.0, 1.0));
    }
  }
  return a;
}

/// Matte mixing exact 0/1 plateaus and fractional values, so Conn and
/// trimap code paths see every case.
inline AlphaMatte plateau_alpha(Rng& rng, int w, int h) {
  AlphaMatte a(w, h);
  for (float& v : a.values()) {
    const double u = rng.uniform();
    v = u < 0.35 ? 1.0f : u < 0.55 ? 0.0f : static_cast<float>(rng.uniform());
  }
  return a;
}

inline Trimap random_trimap(Rng& rng, int w, int h, double p_unknown = 0.6) {
  Trimap t(w, h);
  for (TrimapLabel& l : t.labels()) {
    const double u = rng.uniform();
    l = u < p_unknown ? TrimapLabel::kUnknown
        : u < (1.0 + p_unknown) / 2 ? TrimapLabel::kForeground
                                    : TrimapLabel::kBackground;
  }
  return t;
}

inline double max_abs_diff(const RasterImage& a, const RasterImage& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i) {
    m = std::max(m, std::fabs(static_cast<double>(a.values()[i]) - b.values()[i]));
  }
  return m;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("alphakit_test_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& child) const { return path_ / child; }

 private:
  std::filesystem::path path_;
};

/// Small DIM-style source tree: fg/, alpha/ (stem-matched) and bg/.
inline void write_source_tree(const std::filesystem::path& root, int n_fg, int n_bg, int fg_w,
                              int fg_h, int bg_w, int bg_h, std::uint64_t seed = 1) {
  Rng rng(seed);
  std::filesystem::create_directories(root / "fg");
  std::filesystem::create_directories(root / "alpha");
  std::filesystem::create_directories(root / "bg");
  for (int i = 0; i < n_fg; ++i) {
    const std::string stem = "fg" + std::to_string(i);
    write_image_png(root / "fg" / (stem + ".png"), random_image(rng, fg_w, fg_h));
    write_alpha_png(root / "alpha" / (stem + ".png"),
                    disc_alpha(fg_w, fg_h, std::min(fg_w, fg_h) * (0.25 + 0.05 * i), 12.0), 8);
  }
  for (int i = 0; i < n_bg; ++i) {
    write_image_png(root / "bg" / ("bg" + std::to_string(i) + ".png"),
                    random_image(rng, bg_w, bg_h));
  }
}

}  // namespace testing

