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

#include "alphakit/trimap.hpp"

#include <algorithm>
#include <limits>

namespace alphakit {
namespace {

constexpr double kFar = 1e20;

// 1-D squared distance transform of sampled function f (Felzenszwalb &
// Huttenlocher). d[q] = min_p (q - p)^2 + f[p].
void distance_1d(const std::vector<double>& f, std::vector<double>& d, std::vector<int>& v,
                 std::vector<double>& z) {
  const int n = static_cast<int>(f.size());
  int k = 0;
  v[0] = 0;
  z[0] = -std::numeric_limits<double>::infinity();
  z[1] = std::numeric_limits<double>::infinity();
  for (int q = 1; q < n; ++q) {
    auto intersect = [&](int p) {
      return ((f[q] + static_cast<double>(q) * q) - (f[p] + static_cast<double>(p) * p)) /
             (2.0 * (q - p));
    };
    double s = intersect(v[k]);
    while (s <= z[k]) {
      --k;
      s = intersect(v[k]);
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = std::numeric_limits<double>::infinity();
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    const double dq = q - v[k];
    d[q] = dq * dq + f[v[k]];
  }
}

// Squared distance from every pixel to the nearest pixel with mask == 0.
std::vector<double> squared_distance_to_zero(std::span<const std::uint8_t> mask, int w, int h) {
  std::vector<double> grid(mask.size());
  for (std::size_t i = 0; i < mask.size(); ++i) grid[i] = mask[i] ? kFar : 0.0;
  const int n = std::max(w, h);
  std::vector<double> f(n), d(n), z(n + 1);
  std::vector<int> v(n);
  f.resize(h);
  d.resize(h);
  for (int x = 0; x < w; ++x) {
    for (int y = 0; y < h; ++y) f[y] = grid[static_cast<std::size_t>(y) * w + x];
    distance_1d(f, d, v, z);
    for (int y = 0; y < h; ++y) grid[static_cast<std::size_t>(y) * w + x] = d[y];
  }
  f.resize(w);
  d.resize(w);
  for (int y = 0; y < h; ++y) {
    std::copy_n(grid.begin() + static_cast<std::ptrdiff_t>(y) * w, w, f.begin());
    distance_1d(f, d, v, z);
    std::copy_n(d.begin(), w, grid.begin() + static_cast<std::ptrdiff_t>(y) * w);
  }
  return grid;
}

}  // namespace

std::vector<std::uint8_t> erode_disk(std::span<const std::uint8_t> mask, int width, int height,
                                     int radius) {
  if (mask.size() != static_cast<std::size_t>(width) * height) {
    throw InputError("erode_disk: mask size does not match dimensions");
  }
  if (radius < 0) throw InputError("erode_disk: radius must be non-negative");
  std::vector<std::uint8_t> out(mask.size(), 0);
  if (mask.empty()) return out;
  const std::vector<double> dist = squared_distance_to_zero(mask, width, height);
  const double r2 = static_cast<double>(radius) * radius;
  for (std::size_t i = 0; i < mask.size(); ++i) out[i] = dist[i] > r2 ? 1 : 0;
  return out;
}

Trimap generate_trimap(const AlphaMatte& alpha, int radius) {
  if (radius <= 0) throw InputError("generate_trimap: dilation radius must be >= 1");
  const int w = alpha.width();
  const int h = alpha.height();
  std::vector<std::uint8_t> fg(alpha.pixel_count());
  std::vector<std::uint8_t> bg(alpha.pixel_count());
  const auto a = alpha.values();
  for (std::size_t i = 0; i < a.size(); ++i) {
    fg[i] = a[i] >= 1.0f - kPureAlphaEpsilon ? 1 : 0;
    bg[i] = a[i] <= kPureAlphaEpsilon ? 1 : 0;
  }
  const auto fg_core = erode_disk(fg, w, h, radius);
  const auto bg_core = erode_disk(bg, w, h, radius);
  Trimap trimap(w, h, TrimapLabel::kUnknown);
  auto labels = trimap.labels();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (fg_core[i]) {
      labels[i] = TrimapLabel::kForeground;
    } else if (bg_core[i]) {
      labels[i] = TrimapLabel::kBackground;
    }
  }
  return trimap;
}

Trimap generate_trimap(const AlphaMatte& alpha, Rng& rng, int min_radius, int max_radius,
                       int* drawn_radius) {
  if (min_radius <= 0 || max_radius < min_radius) {
    throw InputError("generate_trimap: radius range must satisfy 1 <= min <= max");
  }
  const int radius = static_cast<int>(rng.uniform_int(min_radius, max_radius));
  if (drawn_radius) *drawn_radius = radius;
  return generate_trimap(alpha, radius);
}

std::vector<SweepRange> default_sweep_ranges() {
  return {{"20", 11, 20}, {"30", 21, 30}, {"40", 31, 40}, {"50", 41, 50}};
}

std::vector<SweepTrimap> sweep_sets(const AlphaMatte& alpha, Rng& rng,
                                    std::span<const SweepRange> ranges) {
  std::vector<SweepTrimap> out;
  out.reserve(ranges.size());
  for (const SweepRange& range : ranges) {
    int radius = 0;
    Trimap t = generate_trimap(alpha, rng, range.min_radius, range.max_radius, &radius);
    out.push_back({range.label, radius, std::move(t)});
  }
  return out;
}

std::vector<SweepTrimap> sweep_sets(const AlphaMatte& alpha, Rng& rng) {
  const auto ranges = default_sweep_ranges();
  return sweep_sets(alpha, rng, ranges);
}

}  // namespace alphakit
