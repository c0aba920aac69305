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

#include "alphakit/filters.hpp"

#include <algorithm>
#include <cmath>

namespace alphakit {

int reflect101(int i, int n) {
  if (n == 1) return 0;
  const int period = 2 * (n - 1);
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - i;
}

std::vector<float> gaussian_kernel(double sigma, int radius) {
  if (!(sigma > 0.0)) throw InputError("gaussian_kernel: sigma must be positive");
  if (radius < 0) radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> w(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    w[i + radius] = std::exp(-(i * i) / (2.0 * sigma * sigma));
    sum += w[i + radius];
  }
  std::vector<float> out(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) out[i] = static_cast<float>(w[i] / sum);
  return out;
}

template <int C>
Raster<C> convolve_separable(const Raster<C>& in, const std::vector<float>& kernel) {
  const int w = in.width();
  const int h = in.height();
  const int radius = static_cast<int>(kernel.size() / 2);
  Raster<C> tmp(w, h);
  Raster<C> out(w, h);
  std::vector<int> xs(static_cast<std::size_t>(w) + 2 * radius);
  for (int i = 0; i < static_cast<int>(xs.size()); ++i) xs[i] = reflect101(i - radius, w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < C; ++c) {
        float acc = 0.0f;
        for (int k = 0; k <= 2 * radius; ++k) acc += kernel[k] * in.at(xs[x + k], y, c);
        tmp.at(x, y, c) = acc;
      }
    }
  }
  std::vector<int> ys(static_cast<std::size_t>(h) + 2 * radius);
  for (int i = 0; i < static_cast<int>(ys.size()); ++i) ys[i] = reflect101(i - radius, h);
  std::vector<float> acc(static_cast<std::size_t>(w) * C);
  for (int y = 0; y < h; ++y) {
    std::fill(acc.begin(), acc.end(), 0.0f);
    for (int k = 0; k <= 2 * radius; ++k) {
      const float wk = kernel[k];
      const float* row = &tmp.values()[static_cast<std::size_t>(ys[y + k]) * w * C];
      for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += wk * row[i];
    }
    std::copy(acc.begin(), acc.end(), &out.values()[static_cast<std::size_t>(y) * w * C]);
  }
  return out;
}

template <int C>
Raster<C> resize_bilinear(const Raster<C>& in, int width, int height) {
  if (width <= 0 || height <= 0) throw InputError("resize_bilinear: empty target");
  if (in.empty()) throw InputError("resize_bilinear: empty source");
  if (width == in.width() && height == in.height()) return in;
  Raster<C> out(width, height);
  const double sx = static_cast<double>(in.width()) / width;
  const double sy = static_cast<double>(in.height()) / height;
  for (int y = 0; y < height; ++y) {
    const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, in.height() - 1.0);
    const int y0 = static_cast<int>(fy);
    const int y1 = std::min(y0 + 1, in.height() - 1);
    const float ty = static_cast<float>(fy - y0);
    for (int x = 0; x < width; ++x) {
      const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, in.width() - 1.0);
      const int x0 = static_cast<int>(fx);
      const int x1 = std::min(x0 + 1, in.width() - 1);
      const float tx = static_cast<float>(fx - x0);
      for (int c = 0; c < C; ++c) {
        const float top = in.at(x0, y0, c) + tx * (in.at(x1, y0, c) - in.at(x0, y0, c));
        const float bot = in.at(x0, y1, c) + tx * (in.at(x1, y1, c) - in.at(x0, y1, c));
        out.at(x, y, c) = top + ty * (bot - top);
      }
    }
  }
  return out;
}

template <int C>
Raster<C> warp_affine(const Raster<C>& in, const AffineMatrix& m, int width,
                      int height, float fill) {
  Raster<C> out(width, height, fill);
  const int iw = in.width();
  const int ih = in.height();
  auto sample = [&](int x, int y, int c) {
    return (x < 0 || y < 0 || x >= iw || y >= ih) ? fill : in.at(x, y, c);
  };
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double sx = m[0] * x + m[1] * y + m[2];
      const double sy = m[3] * x + m[4] * y + m[5];
      if (sx <= -1.0 || sy <= -1.0 || sx >= iw || sy >= ih) continue;
      const int x0 = static_cast<int>(std::floor(sx));
      const int y0 = static_cast<int>(std::floor(sy));
      const float tx = static_cast<float>(sx - x0);
      const float ty = static_cast<float>(sy - y0);
      for (int c = 0; c < C; ++c) {
        const float top = sample(x0, y0, c) + tx * (sample(x0 + 1, y0, c) - sample(x0, y0, c));
        const float bot = sample(x0, y0 + 1, c) + tx * (sample(x0 + 1, y0 + 1, c) - sample(x0, y0 + 1, c));
        out.at(x, y, c) = top + ty * (bot - top);
      }
    }
  }
  return out;
}

template <int C>
Raster<C> crop(const Raster<C>& in, int x0, int y0, int width, int height) {
  if (x0 < 0 || y0 < 0 || width < 0 || height < 0 || x0 + width > in.width() ||
      y0 + height > in.height()) {
    throw InputError("crop: window outside raster");
  }
  Raster<C> out(width, height);
  const std::size_t row = static_cast<std::size_t>(width) * C;
  for (int y = 0; y < height; ++y) {
    const float* src = &in.values()[(static_cast<std::size_t>(y0 + y) * in.width() + x0) * C];
    std::copy(src, src + row, &out.values()[static_cast<std::size_t>(y) * row]);
  }
  return out;
}

template Raster<1> convolve_separable(const Raster<1>&, const std::vector<float>&);
template Raster<3> convolve_separable(const Raster<3>&, const std::vector<float>&);
template Raster<1> resize_bilinear(const Raster<1>&, int, int);
template Raster<3> resize_bilinear(const Raster<3>&, int, int);
template Raster<1> warp_affine(const Raster<1>&, const AffineMatrix&, int, int, float);
template Raster<3> warp_affine(const Raster<3>&, const AffineMatrix&, int, int, float);
template Raster<1> crop(const Raster<1>&, int, int, int, int);
template Raster<3> crop(const Raster<3>&, int, int, int, int);

}  // namespace alphakit
