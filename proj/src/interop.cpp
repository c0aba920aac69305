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

#include "alphakit/interop.hpp"

#include "alphakit/image_io.hpp"
#include "alphakit/text_io.hpp"
#include "alphakit/worker_pool.hpp"

namespace alphakit {

BoundPatch bind_patch(const TrainingPatch& patch) {
  BoundPatch b;
  b.index = patch.index;
  b.width = patch.image.width();
  b.height = patch.image.height();
  b.image.reserve(patch.image.values().size());
  for (float v : patch.image.values()) b.image.push_back(dequantize(quantize(v, 255), 255));
  b.alpha.reserve(patch.alpha.values().size());
  for (float v : patch.alpha.values()) {
    b.alpha.push_back(dequantize(quantize(v, 65535), 65535));
  }
  b.trimap.reserve(patch.trimap.pixel_count());
  for (TrimapLabel l : patch.trimap.labels()) {
    b.trimap.push_back(dequantize(static_cast<std::uint8_t>(l), 255));
  }
  b.record_json = patch.record.to_json_line();
  return b;
}

namespace {

Manifest manifest_for(const RunConfig& cfg) {
  const std::filesystem::path path = cfg.manifest_path();
  if (std::filesystem::is_regular_file(path)) return Manifest::load(path);
  std::map<Split, SplitSources> sources;
  if (cfg.paths.train.configured()) {
    sources[Split::kTrain] = {cfg.paths.train.fg_dir, cfg.paths.train.alpha_dir,
                              cfg.paths.train.bg_dir};
  }
  if (cfg.paths.test.configured()) {
    sources[Split::kTest] = {cfg.paths.test.fg_dir, cfg.paths.test.alpha_dir,
                             cfg.paths.test.bg_dir};
  }
  return build_manifest(sources, cfg.rules, cfg.seed);
}

}  // namespace

PatchIterator::PatchIterator(const std::filesystem::path& config_path, const EnvLookup& env)
    : PatchIterator(load_config(config_path, env)) {}

PatchIterator::PatchIterator(RunConfig config)
    : config_(std::move(config)), manifest_(manifest_for(config_)) {
  labeler_.set_serialized(true);
  EmitOptions options;
  options.seed = config_.seed;
  options.count = config_.augment_count;
  options.workers = config_.workers;
  options.policy = config_.policy;
  options.pipeline = config_.pipeline;
  options.labeler = &labeler_;
  factory_ = std::make_unique<PatchFactory>(manifest_, options);
}

void PatchIterator::register_hook(BufferHook hook) {
  labeler_.register_hook([hook = std::move(hook)](const RasterImage& image, const Trimap& trimap) {
    std::vector<float> tri(trimap.pixel_count());
    for (std::size_t i = 0; i < tri.size(); ++i) {
      tri[i] = static_cast<float>(static_cast<std::uint8_t>(trimap.labels()[i])) / 255.0f;
    }
    const std::vector<float> out = hook(image.values(), tri, image.width(), image.height());
    if (out.size() != image.pixel_count()) {
      // Let the labeler's shape check reject it.
      return AlphaMatte(0, 0);
    }
    AlphaMatte alpha(image.width(), image.height());
    std::copy(out.begin(), out.end(), alpha.values().begin());
    return alpha;
  });
}

void PatchIterator::refill() {
  buffer_.clear();
  buffer_pos_ = 0;
  const std::uint64_t end = std::min<std::uint64_t>(
      config_.augment_count, next_index_ + static_cast<std::uint64_t>(config_.workers) * 2);
  const std::size_t n = static_cast<std::size_t>(end - next_index_);
  const std::uint64_t first = next_index_;
  ordered_parallel_map<std::optional<TrainingPatch>>(
      n, config_.workers,
      [&](std::size_t i) {
        std::string error;
        return factory_->make(first + i, &error);
      },
      [&](std::size_t, std::optional<TrainingPatch>&& p) {
        if (p) {
          buffer_.push_back(bind_patch(*p));
        } else {
          ++skipped_;
        }
      });
  next_index_ = end;
}

std::optional<BoundPatch> PatchIterator::next() {
  while (buffer_pos_ >= buffer_.size()) {
    if (next_index_ >= config_.augment_count) return std::nullopt;
    refill();
  }
  return std::move(buffer_[buffer_pos_++]);
}

std::size_t PatchIterator::skipped() const { return skipped_; }

std::map<std::string, double> eval_metrics(std::span<const float> pred, std::span<const float> gt,
                                           std::span<const std::uint8_t> trimap, int width,
                                           int height, const MetricConstants& constants) {
  if (width <= 0 || height <= 0) throw InputError("eval_metrics: dimensions must be positive");
  const std::size_t n = static_cast<std::size_t>(width) * height;
  if (pred.size() != n || gt.size() != n || trimap.size() != n) {
    throw InputError("eval_metrics: buffer sizes do not match " + std::to_string(width) + "x" +
                     std::to_string(height));
  }
  AlphaMatte p(width, height);
  AlphaMatte g(width, height);
  Trimap t(width, height);
  std::copy(pred.begin(), pred.end(), p.values().begin());
  std::copy(gt.begin(), gt.end(), g.values().begin());
  for (std::size_t i = 0; i < n; ++i) {
    t.labels()[i] = trimap[i] == 0     ? TrimapLabel::kBackground
                    : trimap[i] == 255 ? TrimapLabel::kForeground
                                       : TrimapLabel::kUnknown;
  }
  const MetricReport r = evaluate(p, g, t, constants);
  std::map<std::string, double> out;
  if (r.sad) out["sad"] = *r.sad;
  if (r.mse) out["mse"] = *r.mse;
  if (r.grad) out["grad"] = *r.grad;
  if (r.conn) out["conn"] = *r.conn;
  return out;
}

}  // namespace alphakit
