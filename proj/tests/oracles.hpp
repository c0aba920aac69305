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

// Brute-force reference implementations used only by tests. They follow the
// metric and loss definitions literally (explicit 2-D kernels, per-pixel
// flood fills, per-pixel neighbourhood scans) and share no code with the
// library beyond the raster types.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "alphakit/raster.hpp"

namespace oracle {

using alphakit::AlphaMatte;
using alphakit::Trimap;
using alphakit::TrimapLabel;

inline bool counts(const Trimap& tri, int x, int y) {
  return tri.at(x, y) == TrimapLabel::kUnknown;
}

inline std::optional<double> sad(const AlphaMatte& p, const AlphaMatte& g, const Trimap& tri) {
  double s = 0.0;
  int n = 0;
  for (int y = 0; y < p.height(); ++y) {
    for (int x = 0; x < p.width(); ++x) {
      if (!counts(tri, x, y)) continue;
      s += std::fabs(static_cast<double>(p.at(x, y)) - static_cast<double>(g.at(x, y)));
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return s / 1000.0;
}

inline std::optional<double> mse(const AlphaMatte& p, const AlphaMatte& g, const Trimap& tri) {
  double s = 0.0;
  int n = 0;
  for (int y = 0; y < p.height(); ++y) {
    for (int x = 0; x < p.width(); ++x) {
      if (!counts(tri, x, y)) continue;
      const double d = static_cast<double>(p.at(x, y)) - static_cast<double>(g.at(x, y));
      s += d * d;
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return s / n;
}

/// 2-D Gaussian-derivative kernels: kx(dx, dy) = d(dx) s(dy), ky = s(dx) d(dy),
/// s the unit-sum Gaussian and d the odd taps dx*G(dx) scaled so
/// sum dx * d(dx) = 1. Support ceil(3 sigma).
struct GradKernel {
  int r = 0;
  std::vector<double> kx;  // (2r+1)^2, row-major over (dy, dx)
  std::vector<double> ky;
};

inline GradKernel grad_kernel(double sigma) {
  GradKernel k;
  k.r = static_cast<int>(std::ceil(3.0 * sigma));
  const int n = 2 * k.r + 1;
  std::vector<double> s(n), d(n);
  double ssum = 0.0, moment = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = i - k.r;
    const double e = std::exp(-t * t / (2.0 * sigma * sigma));
    s[i] = e;
    d[i] = t * e;
    ssum += e;
    moment += t * t * e;
  }
  k.kx.resize(n * n);
  k.ky.resize(n * n);
  for (int dy = 0; dy < n; ++dy) {
    for (int dx = 0; dx < n; ++dx) {
      k.kx[dy * n + dx] = (d[dx] / moment) * (s[dy] / ssum);
      k.ky[dy * n + dx] = (s[dx] / ssum) * (d[dy] / moment);
    }
  }
  return k;
}

inline std::vector<double> grad_magnitude(const AlphaMatte& a, const GradKernel& k) {
  const int w = a.width(), h = a.height(), n = 2 * k.r + 1;
  std::vector<double> out(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double gx = 0.0, gy = 0.0;
      for (int dy = -k.r; dy <= k.r; ++dy) {
        for (int dx = -k.r; dx <= k.r; ++dx) {
          const int sx = std::min(std::max(x + dx, 0), w - 1);
          const int sy = std::min(std::max(y + dy, 0), h - 1);
          const double v = a.at(sx, sy);
          gx += k.kx[(dy + k.r) * n + (dx + k.r)] * v;
          gy += k.ky[(dy + k.r) * n + (dx + k.r)] * v;
        }
      }
      out[static_cast<std::size_t>(y) * w + x] = std::sqrt(gx * gx + gy * gy);
    }
  }
  return out;
}

inline std::optional<double> grad(const AlphaMatte& p, const AlphaMatte& g, const Trimap& tri,
                                  double sigma = 1.4, double q = 2.0) {
  const GradKernel k = grad_kernel(sigma);
  const auto mp = grad_magnitude(p, k);
  const auto mg = grad_magnitude(g, k);
  double s = 0.0;
  int n = 0;
  for (int y = 0; y < p.height(); ++y) {
    for (int x = 0; x < p.width(); ++x) {
      if (!counts(tri, x, y)) continue;
      const std::size_t i = static_cast<std::size_t>(y) * p.width() + x;
      s += std::pow(std::fabs(mp[i] - mg[i]), q);
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return s / 1000.0;
}

/// Connected components by repeated min-label propagation (no queues).
inline std::vector<int> component_labels(const std::vector<bool>& mask, int w, int h) {
  std::vector<int> label(mask.size(), -1);
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) label[i] = static_cast<int>(i);
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const int i = y * w + x;
        if (label[i] < 0) continue;
        const int nb[4][2] = {{x - 1, y}, {x + 1, y}, {x, y - 1}, {x, y + 1}};
        for (const auto& q : nb) {
          if (q[0] < 0 || q[1] < 0 || q[0] >= w || q[1] >= h) continue;
          const int j = q[1] * w + q[0];
          if (label[j] >= 0 && label[j] < label[i]) {
            label[i] = label[j];
            changed = true;
          }
        }
      }
    }
  }
  return label;
}

/// Depth-first search from `start` through `mask`; true if any pixel with
/// target[i] is reached.
inline bool reaches(int start, const std::vector<bool>& mask, const std::vector<bool>& target,
                    int w, int h) {
  if (!mask[start]) return false;
  std::vector<bool> seen(mask.size(), false);
  std::vector<int> stack{start};
  seen[start] = true;
  while (!stack.empty()) {
    const int i = stack.back();
    stack.pop_back();
    if (target[i]) return true;
    const int x = i % w, y = i / w;
    const int nb[4][2] = {{x - 1, y}, {x + 1, y}, {x, y - 1}, {x, y + 1}};
    for (const auto& q : nb) {
      if (q[0] < 0 || q[1] < 0 || q[0] >= w || q[1] >= h) continue;
      const int j = q[1] * w + q[0];
      if (mask[j] && !seen[j]) {
        seen[j] = true;
        stack.push_back(j);
      }
    }
  }
  return false;
}

/// Connectivity error, 4-connectivity, exhaustive per pixel and threshold.
inline std::optional<double> conn(const AlphaMatte& p, const AlphaMatte& g, const Trimap& tri,
                                  double step = 0.1, double theta = 0.15) {
  const int w = p.width(), h = p.height();
  const int n = w * h;
  bool any_unknown = false;
  for (int i = 0; i < n; ++i) any_unknown |= tri.labels()[i] == TrimapLabel::kUnknown;
  if (!any_unknown) return std::nullopt;

  std::vector<bool> opaque(n);
  for (int i = 0; i < n; ++i) {
    opaque[i] = p.values()[i] >= 1.0f && g.values()[i] >= 1.0f;
  }
  const auto labels = component_labels(opaque, w, h);
  // Component label = its smallest raster index, so ties resolve to the
  // earliest component when scanning labels in increasing order.
  int best_label = -1, best_size = 0;
  for (int l = 0; l < n; ++l) {
    const int size = static_cast<int>(std::count(labels.begin(), labels.end(), l));
    if (size > best_size) {
      best_size = size;
      best_label = l;
    }
  }
  if (best_label < 0) return std::nullopt;
  std::vector<bool> omega(n);
  for (int i = 0; i < n; ++i) omega[i] = labels[i] == best_label;

  std::vector<double> thresholds;
  for (int k = 0; k * step < 1.0 - 1e-12; ++k) thresholds.push_back(k * step);
  thresholds.push_back(1.0);

  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    if (tri.labels()[i] != TrimapLabel::kUnknown) continue;
    double level = 0.0;
    for (double t : thresholds) {
      std::vector<bool> mask(n);
      for (int j = 0; j < n; ++j) {
        mask[j] = omega[j] || (p.values()[j] >= t && g.values()[j] >= t);
      }
      if (reaches(i, mask, omega, w, h)) level = std::max(level, t);
    }
    const double dp = p.values()[i] - level;
    const double dg = g.values()[i] - level;
    const double phi_p = 1.0 - dp * (dp >= theta ? 1.0 : 0.0);
    const double phi_g = 1.0 - dg * (dg >= theta ? 1.0 : 0.0);
    s += std::fabs(phi_p - phi_g);
  }
  return s / 1000.0;
}

/// Reflect-101 index by explicit mirroring steps.
inline int mirror(int i, int n) {
  if (n == 1) return 0;
  while (i < 0 || i >= n) {
    if (i < 0) i = -i;
    if (i >= n) i = 2 * (n - 1) - i;
  }
  return i;
}

using Plane = std::vector<std::vector<double>>;  // [y][x]

inline Plane blur2d(const Plane& in, double gain) {
  static const double k1[5] = {1, 4, 6, 4, 1};
  const int h = static_cast<int>(in.size()), w = static_cast<int>(in[0].size());
  Plane out(h, std::vector<double>(w, 0.0));
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int j = -2; j <= 2; ++j) {
        for (int i = -2; i <= 2; ++i) {
          acc += k1[j + 2] * k1[i + 2] / 256.0 * in[mirror(y + j, h)][mirror(x + i, w)];
        }
      }
      out[y][x] = gain * acc;
    }
  }
  return out;
}

inline double laplacian_loss(const AlphaMatte& p, const AlphaMatte& g, int levels) {
  auto to_plane = [](const AlphaMatte& a) {
    Plane pl(a.height(), std::vector<double>(a.width()));
    for (int y = 0; y < a.height(); ++y) {
      for (int x = 0; x < a.width(); ++x) pl[y][x] = a.at(x, y);
    }
    return pl;
  };
  auto bands = [levels](Plane cur) {
    std::vector<Plane> out;
    for (int k = 0; k < levels; ++k) {
      const int h = static_cast<int>(cur.size()), w = static_cast<int>(cur[0].size());
      const Plane b = blur2d(cur, 1.0);
      Plane down((h + 1) / 2, std::vector<double>((w + 1) / 2));
      for (int y = 0; y < (h + 1) / 2; ++y) {
        for (int x = 0; x < (w + 1) / 2; ++x) down[y][x] = b[2 * y][2 * x];
      }
      Plane zeros(h, std::vector<double>(w, 0.0));
      for (int y = 0; y < (h + 1) / 2; ++y) {
        for (int x = 0; x < (w + 1) / 2; ++x) zeros[2 * y][2 * x] = down[y][x];
      }
      const Plane up = blur2d(zeros, 4.0);
      Plane band(h, std::vector<double>(w));
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) band[y][x] = cur[y][x] - up[y][x];
      }
      out.push_back(band);
      cur = down;
    }
    return out;
  };
  const auto bp = bands(to_plane(p));
  const auto bg = bands(to_plane(g));
  double loss = 0.0;
  for (int k = 0; k < levels; ++k) {
    double s = 0.0;
    std::size_t n = 0;
    for (std::size_t y = 0; y < bp[k].size(); ++y) {
      for (std::size_t x = 0; x < bp[k][y].size(); ++x) {
        s += std::fabs(bp[k][y][x] - bg[k][y][x]);
        ++n;
      }
    }
    loss += std::pow(2.0, k) * s / n;
  }
  return loss;
}

/// Binary erosion by the disk dx^2 + dy^2 <= r^2; out-of-bounds offsets
/// are ignored.
inline std::vector<bool> erode(const std::vector<bool>& mask, int w, int h, int r) {
  std::vector<bool> out(mask.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      bool keep = mask[y * w + x];
      for (int dy = -r; dy <= r && keep; ++dy) {
        for (int dx = -r; dx <= r && keep; ++dx) {
          if (dx * dx + dy * dy > r * r) continue;
          const int sx = x + dx, sy = y + dy;
          if (sx < 0 || sy < 0 || sx >= w || sy >= h) continue;
          keep = mask[sy * w + sx];
        }
      }
      out[y * w + x] = keep;
    }
  }
  return out;
}

inline Trimap trimap(const AlphaMatte& a, int r) {
  const int w = a.width(), h = a.height();
  std::vector<bool> fg(w * h), bg(w * h);
  for (int i = 0; i < w * h; ++i) {
    fg[i] = a.values()[i] >= 1.0f - 1.0f / 255.0f;
    bg[i] = a.values()[i] <= 1.0f / 255.0f;
  }
  const auto efg = erode(fg, w, h, r);
  const auto ebg = erode(bg, w, h, r);
  Trimap t(w, h);
  for (int i = 0; i < w * h; ++i) {
    t.labels()[i] = efg[i]   ? TrimapLabel::kForeground
                    : ebg[i] ? TrimapLabel::kBackground
                             : TrimapLabel::kUnknown;
  }
  return t;
}

}  // namespace oracle
