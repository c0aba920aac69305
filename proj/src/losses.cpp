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

#include "alphakit/losses.hpp"

#include <array>
#include <cmath>

#include "alphakit/filters.hpp"

namespace alphakit {
namespace {

struct Plane {
  int w = 0;
  int h = 0;
  std::vector<double> v;

  double& at(int x, int y) { return v[static_cast<std::size_t>(y) * w + x]; }
  double at(int x, int y) const { return v[static_cast<std::size_t>(y) * w + x]; }
};

constexpr std::array<double, 5> kBinomial{1.0 / 16, 4.0 / 16, 6.0 / 16, 4.0 / 16, 1.0 / 16};

Plane blur5(const Plane& in, double gain) {
  Plane tmp{in.w, in.h, std::vector<double>(in.v.size())};
  for (int y = 0; y < in.h; ++y) {
    for (int x = 0; x < in.w; ++x) {
      double acc = 0.0;
      for (int k = -2; k <= 2; ++k) acc += kBinomial[k + 2] * in.at(reflect101(x + k, in.w), y);
      tmp.at(x, y) = acc;
    }
  }
  Plane out{in.w, in.h, std::vector<double>(in.v.size())};
  for (int y = 0; y < in.h; ++y) {
    for (int x = 0; x < in.w; ++x) {
      double acc = 0.0;
      for (int k = -2; k <= 2; ++k) acc += kBinomial[k + 2] * tmp.at(x, reflect101(y + k, in.h));
      out.at(x, y) = gain * acc;
    }
  }
  return out;
}

Plane downsample(const Plane& in) {
  const Plane blurred = blur5(in, 1.0);
  Plane out{(in.w + 1) / 2, (in.h + 1) / 2, {}};
  out.v.resize(static_cast<std::size_t>(out.w) * out.h);
  for (int y = 0; y < out.h; ++y) {
    for (int x = 0; x < out.w; ++x) out.at(x, y) = blurred.at(2 * x, 2 * y);
  }
  return out;
}

Plane upsample(const Plane& in, int w, int h) {
  Plane sparse{w, h, std::vector<double>(static_cast<std::size_t>(w) * h, 0.0)};
  for (int y = 0; y < in.h && 2 * y < h; ++y) {
    for (int x = 0; x < in.w && 2 * x < w; ++x) sparse.at(2 * x, 2 * y) = in.at(x, y);
  }
  return blur5(sparse, 4.0);
}

std::vector<Plane> pyramid_bands(const AlphaMatte& alpha, int levels) {
  Plane current{alpha.width(), alpha.height(),
                std::vector<double>(alpha.values().begin(), alpha.values().end())};
  std::vector<Plane> bands;
  for (int k = 0; k < levels; ++k) {
    Plane down = downsample(current);
    const Plane up = upsample(down, current.w, current.h);
    for (std::size_t i = 0; i < current.v.size(); ++i) current.v[i] -= up.v[i];
    bands.push_back(std::move(current));
    current = std::move(down);
  }
  return bands;
}

}  // namespace

RegionMask RegionMask::whole(int width, int height) {
  RegionMask m;
  m.width_ = width;
  m.height_ = height;
  m.mask_.assign(static_cast<std::size_t>(width) * height, 1);
  m.count_ = m.mask_.size();
  return m;
}

RegionMask RegionMask::unknown(const Trimap& trimap) {
  RegionMask m;
  m.width_ = trimap.width();
  m.height_ = trimap.height();
  m.mask_.resize(trimap.pixel_count());
  for (std::size_t i = 0; i < m.mask_.size(); ++i) {
    m.mask_[i] = trimap.labels()[i] == TrimapLabel::kUnknown ? 1 : 0;
    m.count_ += m.mask_[i];
  }
  return m;
}

void LossConfig::validate() const {
  if (!(lambda >= 0.0)) throw InputError("loss config: lambda must be >= 0");
  if (laplacian_levels < 1) throw InputError("loss config: laplacian_levels must be >= 1");
}

double l1_alpha(const AlphaMatte& pred, const AlphaMatte& gt, const RegionMask& region) {
  require_same_shape(pred, gt, "l1_alpha");
  require_same_shape(pred, region, "l1_alpha");
  if (region.size() == 0) throw InputError("l1_alpha: empty region");
  const auto p = pred.values();
  const auto g = gt.values();
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (region.contains(i)) sum += std::fabs(static_cast<double>(p[i]) - g[i]);
  }
  return sum / static_cast<double>(region.size());
}

double composition_loss(const AlphaMatte& pred, const RasterImage& image, const RasterImage& fg,
                        const RasterImage& bg, const RegionMask& region) {
  require_same_shape(pred, image, "composition_loss");
  require_same_shape(pred, fg, "composition_loss");
  require_same_shape(pred, bg, "composition_loss");
  require_same_shape(pred, region, "composition_loss");
  if (region.size() == 0) throw InputError("composition_loss: empty region");
  const auto a = pred.values();
  const auto im = image.values();
  const auto f = fg.values();
  const auto b = bg.values();
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!region.contains(i)) continue;
    const double w = a[i];
    for (std::size_t c = 0; c < 3; ++c) {
      const std::size_t k = i * 3 + c;
      sum += std::fabs(im[k] - (w * f[k] + (1.0 - w) * b[k]));
    }
  }
  return sum / (3.0 * static_cast<double>(region.size()));
}

double laplacian_loss(const AlphaMatte& pred, const AlphaMatte& gt, int levels) {
  require_same_shape(pred, gt, "laplacian_loss");
  if (levels < 1) throw InputError("laplacian_loss: levels must be >= 1");
  const long long min_side = 1LL << levels;
  if (pred.width() < min_side || pred.height() < min_side) {
    throw InputError("laplacian_loss: image too small for " + std::to_string(levels) +
                     " pyramid levels");
  }
  const auto bp = pyramid_bands(pred, levels);
  const auto bg = pyramid_bands(gt, levels);
  double loss = 0.0;
  for (int k = 0; k < levels; ++k) {
    double sum = 0.0;
    for (std::size_t i = 0; i < bp[k].v.size(); ++i) sum += std::fabs(bp[k].v[i] - bg[k].v[i]);
    loss += std::ldexp(1.0, k) * sum / static_cast<double>(bp[k].v.size());
  }
  return loss;
}

double total_variation(const AlphaMatte& alpha) {
  const int w = alpha.width();
  const int h = alpha.height();
  double tv = 0.0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x + 1 < w; ++x) {
      tv += std::fabs(static_cast<double>(alpha.at(x + 1, y)) - alpha.at(x, y));
    }
  }
  for (int y = 0; y + 1 < h; ++y) {
    for (int x = 0; x < w; ++x) {
      tv += std::fabs(static_cast<double>(alpha.at(x, y + 1)) - alpha.at(x, y));
    }
  }
  return tv;
}

double gradient_loss(const AlphaMatte& pred, const AlphaMatte& gt) {
  require_same_shape(pred, gt, "gradient_loss");
  const int w = pred.width();
  const int h = pred.height();
  double sum = 0.0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x + 1 < w; ++x) {
      const double dp = static_cast<double>(pred.at(x + 1, y)) - pred.at(x, y);
      const double dg = static_cast<double>(gt.at(x + 1, y)) - gt.at(x, y);
      sum += std::fabs(dp - dg);
    }
  }
  for (int y = 0; y + 1 < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double dp = static_cast<double>(pred.at(x, y + 1)) - pred.at(x, y);
      const double dg = static_cast<double>(gt.at(x, y + 1)) - gt.at(x, y);
      sum += std::fabs(dp - dg);
    }
  }
  return sum;
}

double gradient_penalty_loss(const AlphaMatte& pred, const AlphaMatte& gt, double lambda) {
  if (!(lambda >= 0.0)) throw InputError("gradient_penalty_loss: lambda must be >= 0");
  const double base = gradient_loss(pred, gt);
  return base + lambda * total_variation(pred);
}

}  // namespace alphakit
