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
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "alphakit/raster.hpp"
#include "alphakit/rng.hpp"
#include "alphakit/strategy.hpp"

namespace alphakit {

enum class Split { kTrain, kTest };

std::string_view to_string(Split split);
std::optional<Split> split_from_string(std::string_view name);

/// Backgrounds composited with each foreground.
struct ManifestRules {
  int train_bg_per_fg = 100;
  int test_bg_per_fg = 20;

  int per_fg(Split split) const { return split == Split::kTrain ? train_bg_per_fg : test_bg_per_fg; }
  void validate() const;
};

struct ManifestEntry {
  std::string id;  // "<fg stem>__<bg stem>__<k>"
  std::string fg_path;
  std::string alpha_path;
  std::string bg_path;
  Split split = Split::kTrain;
  std::uint64_t seed = 0;

  bool operator==(const ManifestEntry&) const = default;
};

struct Manifest {
  ManifestRules rules;
  std::uint64_t seed = 0;
  std::vector<ManifestEntry> entries;

  /// Entries of one split, in manifest order.
  std::vector<const ManifestEntry*> of_split(Split split) const;

  std::string to_json() const;
  static Manifest from_json(std::string_view text);
  void save(const std::filesystem::path& path) const;
  static Manifest load(const std::filesystem::path& path);
};

/// Foreground, matte and background directories of one split.
struct SplitSources {
  std::filesystem::path fg_dir;
  std::filesystem::path alpha_dir;
  std::filesystem::path bg_dir;
};

/// Pairs every foreground (stem-matched to its matte) with rules.per_fg(split)
/// backgrounds. Backgrounds are drawn without replacement per foreground
/// when the pool is large enough, otherwise with replacement and a warning.
/// Throws InputError for missing or empty directories and for unmatched
/// fg/alpha stems (all of them listed).
std::vector<ManifestEntry> build_split_entries(const SplitSources& sources, Split split,
                                               const ManifestRules& rules, std::uint64_t seed);

/// Manifest over the given splits. Entry seeds are unique.
Manifest build_manifest(const std::map<Split, SplitSources>& sources, const ManifestRules& rules,
                        std::uint64_t seed);

/// Parameters of the basic training dataloader.
struct PipelineConfig {
  int patch_size = 512;
  double rotation_deg = 30.0;  // uniform in [-r, r]
  double scale_min = 0.75;
  double scale_max = 1.25;
  double shear_deg = 10.0;
  double flip_probability = 0.5;
  double combine_probability = 0.5;
  double resize_min = 0.5;
  double resize_max = 1.5;
  double jitter_hue = 0.05;         // turns, uniform in [-h, h]
  double jitter_saturation = 0.1;   // multiplicative, 1 +- s
  double jitter_brightness = 0.1;   // multiplicative on V, 1 +- b
  int train_min_radius = 1;
  int train_max_radius = 30;

  void validate() const;
};

/// Lower bound of the denominator when blending two foregrounds.
inline constexpr float kCombineEpsilon = 1e-6f;

/// alpha = 1 - (1 - a1)(1 - a2); F = (a1 F1 + (1 - a1) a2 F2) / max(alpha, eps).
void combine_foregrounds(const RasterImage& fg1, const AlphaMatte& alpha1, const RasterImage& fg2,
                         const AlphaMatte& alpha2, RasterImage& fg_out, AlphaMatte& alpha_out);

/// Thread-safe cache of decoded source files. Holds at most `capacity`
/// images and `capacity` mattes, evicting the oldest insertion first.
class SourceCache {
 public:
  explicit SourceCache(std::size_t capacity = 64) : capacity_(capacity) {}

  std::shared_ptr<const RasterImage> image(const std::string& path);
  std::shared_ptr<const AlphaMatte> alpha(const std::string& path);

 private:
  template <typename T>
  struct Store {
    std::map<std::string, std::shared_ptr<const T>> items;
    std::deque<std::string> order;
  };
  template <typename T, typename Load>
  std::shared_ptr<const T> get(Store<T>& store, const std::string& path, Load load);

  std::size_t capacity_;
  std::mutex mutex_;
  Store<RasterImage> images_;
  Store<AlphaMatte> alphas_;
};

/// Geometric and photometric pre-SA steps, in order: random affine on
/// (F, alpha), optional combination with a second foreground of the same
/// split, random resize (never below the patch size), a patch crop centred
/// on a random unknown-band pixel, and colour jitter on F. The background
/// is scaled to cover the patch and cropped at random.
SamplePair basic_pipeline(const Manifest& manifest, const ManifestEntry& entry, Rng& rng,
                          const PipelineConfig& config, SourceCache& cache);

struct TrainingPatch {
  std::uint64_t index = 0;
  Split split = Split::kTrain;
  RasterImage image;
  AlphaMatte alpha;
  Trimap trimap;
  RasterImage fg;
  RasterImage bg;
  AugmentationRecord record;
};

struct EmitOptions {
  std::uint64_t seed = 0;
  std::size_t count = 0;
  int workers = 1;
  Split split = Split::kTrain;
  SaPolicy policy;
  PipelineConfig pipeline;
  /// Optional; without it pseudo-label requests are skipped.
  PseudoLabeler* labeler = nullptr;
};

struct EmitSummary {
  std::size_t requested = 0;
  std::size_t emitted = 0;
  std::size_t skipped = 0;
  std::map<Strategy, std::size_t> strategy_counts;  // over emitted patches
  std::vector<std::string> errors;                  // "index: message"
};

/// Builds training patches by sample index. Sample i draws from its own
/// streams derived from (seed, i) and uses entry i mod |split|, so the
/// result of an index never depends on which worker makes it.
class PatchFactory {
 public:
  PatchFactory(const Manifest& manifest, const EmitOptions& options);

  /// The patch for `index`, or nullopt with `error` set when the sample
  /// fails or is unusable (pseudo-label unavailable).
  std::optional<TrainingPatch> make(std::uint64_t index, std::string* error) const;

 private:
  const Manifest& manifest_;
  EmitOptions options_;
  std::vector<const ManifestEntry*> entries_;
  mutable SourceCache cache_;
};

/// Produces options.count samples on options.workers threads and hands the
/// usable ones to `sink` in index order.
EmitSummary emit_batch(const Manifest& manifest, const EmitOptions& options,
                       const std::function<void(TrainingPatch&&)>& sink);

/// Convenience overload collecting the patches.
std::vector<TrainingPatch> emit_batch(const Manifest& manifest, const EmitOptions& options,
                                      EmitSummary* summary = nullptr);

/// Writes {dir}/{split}/{index}_{img|alpha|trimap}.png.
void write_patch(const std::filesystem::path& dir, const TrainingPatch& patch);

}  // namespace alphakit
