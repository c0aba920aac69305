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

#include "alphakit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "alphakit/image_io.hpp"
#include "alphakit/text_io.hpp"
#include "alphakit/worker_pool.hpp"

namespace alphakit {
namespace {

void check_inputs(const AlphaMatte& pred, const AlphaMatte& gt, const Trimap& tri,
                  const char* what) {
  require_same_shape(pred, gt, what);
  require_same_shape(pred, tri, what);
}

bool in_region(const Trimap& tri, std::size_t i, MetricRegion region) {
  return region == MetricRegion::kWholeImage || tri.labels()[i] == TrimapLabel::kUnknown;
}

std::size_t region_size(const Trimap& tri, MetricRegion region) {
  return region == MetricRegion::kWholeImage ? tri.pixel_count()
                                             : tri.count(TrimapLabel::kUnknown);
}

// Correlates `in` with taps along x (horizontal == true) or y, replicate
// borders.
std::vector<double> filter_1d(const std::vector<double>& in, int w, int h,
                              const std::vector<double>& taps, bool horizontal) {
  const int r = static_cast<int>(taps.size() / 2);
  std::vector<double> out(in.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int k = -r; k <= r; ++k) {
        const int xx = horizontal ? std::clamp(x + k, 0, w - 1) : x;
        const int yy = horizontal ? y : std::clamp(y + k, 0, h - 1);
        acc += taps[k + r] * in[static_cast<std::size_t>(yy) * w + xx];
      }
      out[static_cast<std::size_t>(y) * w + x] = acc;
    }
  }
  return out;
}

struct GradientTaps {
  std::vector<double> smooth;
  std::vector<double> derivative;
};

GradientTaps gradient_taps(double sigma) {
  const int r = gradient_kernel_radius(sigma);
  GradientTaps t;
  t.smooth.resize(2 * r + 1);
  t.derivative.resize(2 * r + 1);
  double smooth_sum = 0.0;
  double moment = 0.0;
  for (int i = -r; i <= r; ++i) {
    const double g = std::exp(-(i * i) / (2.0 * sigma * sigma));
    t.smooth[i + r] = g;
    t.derivative[i + r] = i * g;
    smooth_sum += g;
    moment += static_cast<double>(i) * i * g;
  }
  for (double& v : t.smooth) v /= smooth_sum;
  for (double& v : t.derivative) v /= moment;
  return t;
}

// Union-find-free BFS labelling helper.
struct Grid {
  int w;
  int h;
  int connectivity;

  template <typename Visit>
  void neighbours(std::size_t i, Visit&& visit) const {
    const int x = static_cast<int>(i % w);
    const int y = static_cast<int>(i / w);
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        if (dx == 0 && dy == 0) continue;
        if (connectivity == 4 && dx != 0 && dy != 0) continue;
        const int nx = x + dx;
        const int ny = y + dy;
        if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
        visit(static_cast<std::size_t>(ny) * w + nx);
      }
    }
  }
};

// Largest connected component of `mask`; ties resolve to the component
// whose first pixel comes earliest in raster order.
std::vector<std::size_t> largest_component(const std::vector<std::uint8_t>& mask,
                                           const Grid& grid) {
  std::vector<std::uint8_t> seen(mask.size(), 0);
  std::vector<std::size_t> best;
  std::vector<std::size_t> current;
  for (std::size_t s = 0; s < mask.size(); ++s) {
    if (!mask[s] || seen[s]) continue;
    current.clear();
    current.push_back(s);
    seen[s] = 1;
    for (std::size_t head = 0; head < current.size(); ++head) {
      grid.neighbours(current[head], [&](std::size_t n) {
        if (mask[n] && !seen[n]) {
          seen[n] = 1;
          current.push_back(n);
        }
      });
    }
    if (current.size() > best.size()) best = current;
  }
  return best;
}

}  // namespace

std::optional<double> sad(const AlphaMatte& pred, const AlphaMatte& gt, const Trimap& tri,
                          MetricRegion region) {
  check_inputs(pred, gt, tri, "sad");
  if (region_size(tri, region) == 0) return std::nullopt;
  const auto p = pred.values();
  const auto g = gt.values();
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (in_region(tri, i, region)) sum += std::fabs(static_cast<double>(p[i]) - g[i]);
  }
  return sum / 1000.0;
}

std::optional<double> mse(const AlphaMatte& pred, const AlphaMatte& gt, const Trimap& tri,
                          MetricRegion region) {
  check_inputs(pred, gt, tri, "mse");
  const std::size_t n = region_size(tri, region);
  if (n == 0) return std::nullopt;
  const auto p = pred.values();
  const auto g = gt.values();
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (in_region(tri, i, region)) {
      const double d = static_cast<double>(p[i]) - g[i];
      sum += d * d;
    }
  }
  return sum / static_cast<double>(n);
}

int gradient_kernel_radius(double sigma) {
  if (!(sigma > 0.0)) throw InputError("gradient kernel: sigma must be positive");
  return static_cast<int>(std::ceil(3.0 * sigma));
}

std::vector<double> gradient_magnitude(const AlphaMatte& alpha, double sigma) {
  const int w = alpha.width();
  const int h = alpha.height();
  const GradientTaps taps = gradient_taps(sigma);
  const std::vector<double> a(alpha.values().begin(), alpha.values().end());
  const auto gx = filter_1d(filter_1d(a, w, h, taps.derivative, true), w, h, taps.smooth, false);
  const auto gy = filter_1d(filter_1d(a, w, h, taps.smooth, true), w, h, taps.derivative, false);
  std::vector<double> mag(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) mag[i] = std::sqrt(gx[i] * gx[i] + gy[i] * gy[i]);
  return mag;
}

std::optional<double> grad_error(const AlphaMatte& pred, const AlphaMatte& gt, const Trimap& tri,
                                 double sigma, double power, MetricRegion region) {
  check_inputs(pred, gt, tri, "grad_error");
  const int r = gradient_kernel_radius(sigma);
  if (pred.width() <= r || pred.height() <= r) {
    throw InputError("grad_error: image " + std::to_string(pred.width()) + "x" +
                     std::to_string(pred.height()) + " is smaller than the kernel support");
  }
  if (!(power > 0.0)) throw InputError("grad_error: power must be positive");
  if (region_size(tri, region) == 0) return std::nullopt;
  const auto mp = gradient_magnitude(pred, sigma);
  const auto mg = gradient_magnitude(gt, sigma);
  double sum = 0.0;
  for (std::size_t i = 0; i < mp.size(); ++i) {
    if (!in_region(tri, i, region)) continue;
    const double d = std::fabs(mp[i] - mg[i]);
    sum += power == 2.0 ? d * d : std::pow(d, power);
  }
  return sum / 1000.0;
}

std::optional<double> conn_error(const AlphaMatte& pred, const AlphaMatte& gt, const Trimap& tri,
                                 double step, double theta, int connectivity,
                                 MetricRegion region) {
  check_inputs(pred, gt, tri, "conn_error");
  if (!(step > 0.0 && step < 1.0)) throw InputError("conn_error: step must lie in (0,1)");
  if (connectivity != 4 && connectivity != 8) {
    throw InputError("conn_error: connectivity must be 4 or 8");
  }
  if (region_size(tri, region) == 0) return std::nullopt;
  const Grid grid{pred.width(), pred.height(), connectivity};
  const auto p = pred.values();
  const auto g = gt.values();
  const std::size_t n = p.size();

  std::vector<std::uint8_t> opaque(n);
  for (std::size_t i = 0; i < n; ++i) opaque[i] = p[i] >= 1.0f && g[i] >= 1.0f;
  const std::vector<std::size_t> source = largest_component(opaque, grid);
  if (source.empty()) return std::nullopt;

  std::vector<double> thresholds;
  for (int k = 0;; ++k) {
    const double t = k * step;
    if (t >= 1.0 - 1e-12) break;
    thresholds.push_back(t);
  }
  thresholds.push_back(1.0);

  std::vector<double> level(n, 0.0);
  std::vector<std::uint8_t> reached(n);
  std::vector<std::size_t> queue;
  for (const double t : thresholds) {
    std::fill(reached.begin(), reached.end(), 0);
    queue.assign(source.begin(), source.end());
    for (std::size_t s : source) reached[s] = 1;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      grid.neighbours(queue[head], [&](std::size_t nb) {
        if (!reached[nb] && p[nb] >= t && g[nb] >= t) {
          reached[nb] = 1;
          queue.push_back(nb);
        }
      });
    }
    for (std::size_t i : queue) level[i] = t;
  }

  auto phi = [theta](double a, double l) {
    const double d = a - l;
    return d >= theta ? 1.0 - d : 1.0;
  };
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (in_region(tri, i, region)) sum += std::fabs(phi(p[i], level[i]) - phi(g[i], level[i]));
  }
  return sum / 1000.0;
}

MetricReport evaluate(const AlphaMatte& pred, const AlphaMatte& gt, const Trimap& tri,
                      const MetricConstants& c) {
  MetricReport r;
  r.unknown_px = region_size(tri, c.region);
  r.sad = sad(pred, gt, tri, c.region);
  r.mse = mse(pred, gt, tri, c.region);
  r.grad = grad_error(pred, gt, tri, c.grad_sigma, c.grad_power, c.region);
  r.conn = conn_error(pred, gt, tri, c.conn_step, c.conn_theta, c.connectivity, c.region);
  return r;
}

std::vector<std::pair<std::string, std::filesystem::path>> list_images(
    const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw InputError("not a directory: '" + dir.string() + "'");
  }
  std::vector<std::pair<std::string, std::filesystem::path>> out;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    if (ext != ".png" && ext != ".jpg" && ext != ".jpeg") continue;
    out.emplace_back(entry.path().stem().string(), entry.path());
  }
  std::sort(out.begin(), out.end());
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (out[i].first == out[i - 1].first) {
      throw InputError("duplicate image stem '" + out[i].first + "' in '" + dir.string() + "'");
    }
  }
  return out;
}

MetricReport mean_report(const std::vector<ImageEvaluation>& images) {
  struct Acc {
    double sum = 0.0;
    std::size_t n = 0;
    void add(const std::optional<double>& v) {
      if (v) {
        sum += *v;
        ++n;
      }
    }
    std::optional<double> mean() const {
      return n ? std::optional<double>(sum / static_cast<double>(n)) : std::nullopt;
    }
  };
  Acc sad_acc, mse_acc, grad_acc, conn_acc;
  double px = 0.0;
  std::size_t count = 0;
  for (const ImageEvaluation& img : images) {
    if (!img.report) continue;
    sad_acc.add(img.report->sad);
    mse_acc.add(img.report->mse);
    grad_acc.add(img.report->grad);
    conn_acc.add(img.report->conn);
    px += static_cast<double>(img.report->unknown_px);
    ++count;
  }
  MetricReport m;
  m.sad = sad_acc.mean();
  m.mse = mse_acc.mean();
  m.grad = grad_acc.mean();
  m.conn = conn_acc.mean();
  m.unknown_px = count ? static_cast<std::size_t>(std::llround(px / static_cast<double>(count))) : 0;
  return m;
}

SetEvaluation evaluate_set(const std::filesystem::path& pred_dir,
                           const std::filesystem::path& gt_dir,
                           const std::filesystem::path& tri_dir, const MetricConstants& constants,
                           int workers) {
  const auto preds = list_images(pred_dir);
  const auto gts = list_images(gt_dir);
  const auto tris = list_images(tri_dir);
  const std::map<std::string, std::filesystem::path> pred_map(preds.begin(), preds.end());
  const std::map<std::string, std::filesystem::path> gt_map(gts.begin(), gts.end());
  const std::map<std::string, std::filesystem::path> tri_map(tris.begin(), tris.end());

  std::set<std::string> stems;
  for (const auto& [stem, _] : preds) stems.insert(stem);
  for (const auto& [stem, _] : gts) stems.insert(stem);

  SetEvaluation out;
  std::vector<std::string> complete;
  for (const std::string& stem : stems) {
    if (pred_map.count(stem) && gt_map.count(stem) && tri_map.count(stem)) {
      complete.push_back(stem);
    } else {
      out.missing.push_back(stem);
    }
  }

  out.images = parallel_collect<ImageEvaluation>(
      complete.size(), workers, [&](std::size_t i) {
        const std::string& stem = complete[i];
        ImageEvaluation e{stem, std::nullopt, {}};
        try {
          const AlphaMatte pred = read_alpha(pred_map.at(stem));
          const AlphaMatte gt = read_alpha(gt_map.at(stem));
          const Trimap tri = read_trimap(tri_map.at(stem));
          e.report = evaluate(pred, gt, tri, constants);
        } catch (const InputError& err) {
          e.error = err.what();
        }
        return e;
      });
  out.mean = mean_report(out.images);
  return out;
}

std::string report_csv(const SetEvaluation& evaluation) {
  std::ostringstream os;
  os << "image_id,sad,mse,grad,conn,unknown_px\n";
  auto row = [&os](const std::string& id, const MetricReport& r) {
    os << csv_escape(id) << ',' << format_optional(r.sad) << ',' << format_optional(r.mse) << ','
       << format_optional(r.grad) << ',' << format_optional(r.conn) << ',' << r.unknown_px << '\n';
  };
  for (const ImageEvaluation& img : evaluation.images) {
    if (img.report) row(img.image_id, *img.report);
  }
  row("MEAN", evaluation.mean);
  return os.str();
}

}  // namespace alphakit
