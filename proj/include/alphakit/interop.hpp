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
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "alphakit/config.hpp"
#include "alphakit/dataset.hpp"
#include "alphakit/metrics.hpp"

namespace alphakit {

/// A training patch as flat float32 row-major buffers holding exactly what
/// the CLI's PNG files decode to: image H*W*3 (8-bit codes / 255), alpha
/// H*W (16-bit codes / 65535) and trimap H*W (codes 0/128/255 over 255).
struct BoundPatch {
  std::uint64_t index = 0;
  int width = 0;
  int height = 0;
  std::vector<float> image;
  std::vector<float> alpha;
  std::vector<float> trimap;
  std::string record_json;  // same line as records.jsonl
};

BoundPatch bind_patch(const TrainingPatch& patch);

/// Host-side alpha predictor for pseudo labels: receives the image
/// (H*W*3) and trimap (H*W) buffers and returns an H*W alpha buffer.
using BufferHook = std::function<std::vector<float>(std::span<const float> image,
                                                    std::span<const float> trimap, int width,
                                                    int height)>;

/// Seeded patch iterator over the same samples `augment` emits for a
/// config: indices 0, 1, 2, ... in order, skipped samples omitted.
class PatchIterator {
 public:
  /// Loads the config (environment overrides apply) and the manifest it
  /// points to; without a manifest file the manifest is built from the
  /// configured directories exactly as `compose` would.
  explicit PatchIterator(const std::filesystem::path& config_path,
                         const EnvLookup& env = process_env);
  explicit PatchIterator(RunConfig config);

  /// Hook calls are serialised. Hook exceptions mark the sample skipped.
  void register_hook(BufferHook hook);

  /// Next usable patch, or nullopt after config.augment_count samples.
  std::optional<BoundPatch> next();

  std::size_t skipped() const;
  const RunConfig& config() const { return config_; }

 private:
  void refill();

  RunConfig config_;
  Manifest manifest_;
  PseudoLabeler labeler_;
  std::unique_ptr<PatchFactory> factory_;
  std::uint64_t next_index_ = 0;
  std::vector<BoundPatch> buffer_;
  std::size_t buffer_pos_ = 0;
  std::size_t skipped_ = 0;
};

/// All four metrics on flat buffers: pred and gt H*W alpha values, trimap
/// H*W label codes {0,128,255} (anything else counts as unknown). Keys
/// sad/mse/grad/conn; undefined metrics are absent.
std::map<std::string, double> eval_metrics(std::span<const float> pred, std::span<const float> gt,
                                           std::span<const std::uint8_t> trimap, int width,
                                           int height, const MetricConstants& constants = {});

}  // namespace alphakit
