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

#include "alphakit/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "alphakit/color.hpp"
#include "alphakit/compose.hpp"
#include "alphakit/filters.hpp"
#include "alphakit/image_io.hpp"
#include "alphakit/log.hpp"
#include "alphakit/metrics.hpp"
#include "alphakit/text_io.hpp"
#include "alphakit/trimap.hpp"
#include "alphakit/worker_pool.hpp"
#include "json.hpp"

namespace alphakit {

using nlohmann::ordered_json;

std::string_view to_string(Split split) { return split == Split::kTrain ? "train" : "test"; }

std::optional<Split> split_from_string(std::string_view name) {
  if (name == "train") return Split::kTrain;
  if (name == "test") return Split::kTest;
  return std::nullopt;
}

void ManifestRules::validate() const {
  if (train_bg_per_fg < 1 || test_bg_per_fg < 1) {
    throw InputError("manifest rules: backgrounds per foreground must be >= 1");
  }
}

std::vector<const ManifestEntry*> Manifest::of_split(Split split) const {
  std::vector<const ManifestEntry*> out;
  for (const ManifestEntry& e : entries) {
    if (e.split == split) out.push_back(&e);
  }
  return out;
}

std::string Manifest::to_json() const {
  ordered_json j;
  j["seed"] = seed;
  j["rules"] = {{"train_bg_per_fg", rules.train_bg_per_fg},
                {"test_bg_per_fg", rules.test_bg_per_fg}};
  ordered_json list = ordered_json::array();
  for (const ManifestEntry& e : entries) {
    list.push_back({{"id", e.id},
                    {"split", std::string(to_string(e.split))},
                    {"fg", e.fg_path},
                    {"alpha", e.alpha_path},
                    {"bg", e.bg_path},
                    {"seed", e.seed}});
  }
  j["entries"] = std::move(list);
  return j.dump(2) + "\n";
}

Manifest Manifest::from_json(std::string_view text) {
  Manifest m;
  try {
    const ordered_json j = ordered_json::parse(text);
    m.seed = j.at("seed").get<std::uint64_t>();
    m.rules.train_bg_per_fg = j.at("rules").at("train_bg_per_fg").get<int>();
    m.rules.test_bg_per_fg = j.at("rules").at("test_bg_per_fg").get<int>();
    for (const auto& e : j.at("entries")) {
      ManifestEntry entry;
      entry.id = e.at("id").get<std::string>();
      const auto split = split_from_string(e.at("split").get<std::string>());
      if (!split) throw InputError("manifest: unknown split in entry '" + entry.id + "'");
      entry.split = *split;
      entry.fg_path = e.at("fg").get<std::string>();
      entry.alpha_path = e.at("alpha").get<std::string>();
      entry.bg_path = e.at("bg").get<std::string>();
      entry.seed = e.at("seed").get<std::uint64_t>();
      m.entries.push_back(std::move(entry));
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("manifest: ") + e.what());
  }
  return m;
}

void Manifest::save(const std::filesystem::path& path) const { write_text_file(path, to_json()); }

Manifest Manifest::load(const std::filesystem::path& path) {
  return from_json(read_text_file(path));
}

namespace {

std::vector<std::pair<std::string, std::filesystem::path>> list_nonempty(
    const std::filesystem::path& dir, const char* what) {
  if (!std::filesystem::is_directory(dir)) {
    throw InputError(std::string(what) + " directory not found: '" + dir.string() + "'");
  }
  auto files = list_images(dir);
  if (files.empty()) {
    throw InputError(std::string(what) + " directory has no images: '" + dir.string() + "'");
  }
  return files;
}

}  // namespace

std::vector<ManifestEntry> build_split_entries(const SplitSources& sources, Split split,
                                               const ManifestRules& rules, std::uint64_t seed) {
  rules.validate();
  const auto fgs = list_nonempty(sources.fg_dir, "foreground");
  const auto alphas = list_nonempty(sources.alpha_dir, "alpha");
  const auto bgs = list_nonempty(sources.bg_dir, "background");

  const std::map<std::string, std::filesystem::path> alpha_map(alphas.begin(), alphas.end());
  const std::map<std::string, std::filesystem::path> fg_map(fgs.begin(), fgs.end());
  std::vector<std::string> unmatched;
  for (const auto& [stem, path] : fgs) {
    if (!alpha_map.count(stem)) unmatched.push_back("fg '" + stem + "' has no alpha");
  }
  for (const auto& [stem, path] : alphas) {
    if (!fg_map.count(stem)) unmatched.push_back("alpha '" + stem + "' has no fg");
  }
  if (!unmatched.empty()) {
    std::string msg = "unmatched foreground/alpha stems:";
    for (const std::string& u : unmatched) msg += "\n  " + u;
    throw InputError(msg);
  }

  const int per_fg = rules.per_fg(split);
  const bool with_replacement = static_cast<std::size_t>(per_fg) > bgs.size();
  if (with_replacement) {
    log_warning(std::string(to_string(split)) + ": background pool (" +
                std::to_string(bgs.size()) + ") smaller than " + std::to_string(per_fg) +
                " per foreground; sampling with replacement");
  }

  Rng rng(derive_seed(seed, split == Split::kTrain ? 0x7472 : 0x7465));
  std::vector<ManifestEntry> entries;
  std::vector<std::size_t> pool(bgs.size());
  for (const auto& [stem, fg_path] : fgs) {
    std::vector<std::size_t> picks;
    if (with_replacement) {
      for (int k = 0; k < per_fg; ++k) {
        picks.push_back(static_cast<std::size_t>(
            rng.uniform_int(0, static_cast<std::int64_t>(bgs.size()) - 1)));
      }
    } else {
      // Partial Fisher-Yates over a fresh index pool.
      for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = i;
      for (int k = 0; k < per_fg; ++k) {
        const auto j = static_cast<std::size_t>(
            rng.uniform_int(k, static_cast<std::int64_t>(pool.size()) - 1));
        std::swap(pool[static_cast<std::size_t>(k)], pool[j]);
        picks.push_back(pool[static_cast<std::size_t>(k)]);
      }
    }
    for (int k = 0; k < per_fg; ++k) {
      const auto& bg = bgs[picks[static_cast<std::size_t>(k)]];
      ManifestEntry e;
      e.id = stem + "__" + bg.first + "__" + std::to_string(k);
      e.fg_path = fg_path.string();
      e.alpha_path = alpha_map.at(stem).string();
      e.bg_path = bg.second.string();
      e.split = split;
      entries.push_back(std::move(e));
    }
  }
  return entries;
}

Manifest build_manifest(const std::map<Split, SplitSources>& sources, const ManifestRules& rules,
                        std::uint64_t seed) {
  if (sources.empty()) throw InputError("build_manifest: no dataset splits configured");
  Manifest m;
  m.rules = rules;
  m.seed = seed;
  for (const auto& [split, src] : sources) {
    auto entries = build_split_entries(src, split, rules, seed);
    for (auto& e : entries) m.entries.push_back(std::move(e));
  }
  // derive_seed is a bijection in the stream index, so these never collide.
  for (std::size_t i = 0; i < m.entries.size(); ++i) m.entries[i].seed = derive_seed(seed, i);
  return m;
}

void PipelineConfig::validate() const {
  auto prob = [](double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw InputError(std::string("pipeline: ") + name + " must be in [0,1]");
    }
  };
  if (patch_size < 1) throw InputError("pipeline: patch_size must be >= 1");
  if (rotation_deg < 0 || shear_deg < 0) {
    throw InputError("pipeline: rotation/shear ranges must be >= 0");
  }
  if (!(scale_min > 0 && scale_min <= scale_max)) {
    throw InputError("pipeline: need 0 < scale_min <= scale_max");
  }
  if (!(resize_min > 0 && resize_min <= resize_max)) {
    throw InputError("pipeline: need 0 < resize_min <= resize_max");
  }
  prob(flip_probability, "flip_probability");
  prob(combine_probability, "combine_probability");
  if (jitter_hue < 0 || jitter_saturation < 0 || jitter_brightness < 0) {
    throw InputError("pipeline: jitter amplitudes must be >= 0");
  }
  if (train_min_radius < 1 || train_min_radius > train_max_radius) {
    throw InputError("pipeline: need 1 <= train_min_radius <= train_max_radius");
  }
}

void combine_foregrounds(const RasterImage& fg1, const AlphaMatte& alpha1, const RasterImage& fg2,
                         const AlphaMatte& alpha2, RasterImage& fg_out, AlphaMatte& alpha_out) {
  require_same_shape(fg1, alpha1, "combine_foregrounds");
  require_same_shape(fg1, fg2, "combine_foregrounds");
  require_same_shape(fg1, alpha2, "combine_foregrounds");
  RasterImage fg(fg1.width(), fg1.height());
  AlphaMatte alpha(fg1.width(), fg1.height());
  const auto a1 = alpha1.values();
  const auto a2 = alpha2.values();
  const auto f1 = fg1.values();
  const auto f2 = fg2.values();
  auto fo = fg.values();
  auto ao = alpha.values();
  for (std::size_t i = 0; i < a1.size(); ++i) {
    const float a = 1.0f - (1.0f - a1[i]) * (1.0f - a2[i]);
    ao[i] = a;
    const float denom = std::max(a, kCombineEpsilon);
    for (std::size_t c = 0; c < 3; ++c) {
      const std::size_t k = i * 3 + c;
      fo[k] = (a1[i] * f1[k] + (1.0f - a1[i]) * a2[i] * f2[k]) / denom;
    }
  }
  fg_out = std::move(fg);
  alpha_out = std::move(alpha);
}

template <typename T, typename Load>
std::shared_ptr<const T> SourceCache::get(Store<T>& store, const std::string& path, Load load) {
  {
    std::lock_guard lock(mutex_);
    auto it = store.items.find(path);
    if (it != store.items.end()) return it->second;
  }
  auto loaded = std::make_shared<const T>(load(path));
  std::lock_guard lock(mutex_);
  auto [it, inserted] = store.items.emplace(path, loaded);
  if (inserted) {
    store.order.push_back(path);
    while (store.order.size() > std::max<std::size_t>(capacity_, 1)) {
      store.items.erase(store.order.front());
      store.order.pop_front();
    }
  }
  return loaded;
}

std::shared_ptr<const RasterImage> SourceCache::image(const std::string& path) {
  return get(images_, path, [](const std::string& p) { return read_image(p); });
}

std::shared_ptr<const AlphaMatte> SourceCache::alpha(const std::string& path) {
  return get(alphas_, path, [](const std::string& p) { return read_alpha(p); });
}

namespace {

constexpr double kDegree = std::numbers::pi / 180.0;

// Random rotation/scale/shear/flip about the image centre. Returns the
// output-to-input map; identity parameters give the exact identity.
AffineMatrix random_affine(Rng& rng, const PipelineConfig& cfg, int width, int height,
                           bool* identity) {
  const double angle = rng.uniform(-cfg.rotation_deg, cfg.rotation_deg) * kDegree;
  const double scale = rng.uniform(cfg.scale_min, cfg.scale_max);
  const double shear = rng.uniform(-cfg.shear_deg, cfg.shear_deg) * kDegree;
  const bool flip = rng.bernoulli(cfg.flip_probability);
  const double fx = flip ? -1.0 : 1.0;
  // Forward linear part: R(angle) * Shear(shear) * S(scale) * Flip.
  const double ca = std::cos(angle);
  const double sa = std::sin(angle);
  const double sh = std::tan(shear);
  // Shear * S * Flip = [[s*fx, sh*s], [0, s]]
  const double m00 = ca * scale * fx;
  const double m01 = ca * sh * scale - sa * scale;
  const double m10 = sa * scale * fx;
  const double m11 = sa * sh * scale + ca * scale;
  const double det = m00 * m11 - m01 * m10;
  const double i00 = m11 / det;
  const double i01 = -m01 / det;
  const double i10 = -m10 / det;
  const double i11 = m00 / det;
  const double cx = (width - 1) / 2.0;
  const double cy = (height - 1) / 2.0;
  *identity = angle == 0.0 && scale == 1.0 && shear == 0.0 && !flip;
  return {i00, i01, cx - i00 * cx - i01 * cy, i10, i11, cy - i10 * cx - i11 * cy};
}

void affine_pair(Rng& rng, const PipelineConfig& cfg, RasterImage& fg, AlphaMatte& alpha) {
  bool identity = false;
  const AffineMatrix m = random_affine(rng, cfg, fg.width(), fg.height(), &identity);
  if (identity) return;
  fg = warp_affine(fg, m, fg.width(), fg.height(), 0.0f);
  alpha = warp_affine(alpha, m, alpha.width(), alpha.height(), 0.0f);
}

bool in_band(float a) { return a > kPureAlphaEpsilon && a < 1.0f - kPureAlphaEpsilon; }

void jitter_foreground(Rng& rng, const PipelineConfig& cfg, RasterImage& fg) {
  const double dh = rng.uniform(-cfg.jitter_hue, cfg.jitter_hue);
  const double ks = 1.0 + rng.uniform(-cfg.jitter_saturation, cfg.jitter_saturation);
  const double kv = 1.0 + rng.uniform(-cfg.jitter_brightness, cfg.jitter_brightness);
  if (dh == 0.0 && ks == 1.0 && kv == 1.0) return;
  auto v = fg.values();
  for (std::size_t i = 0; i < fg.pixel_count(); ++i) {
    float* p = &v[i * 3];
    auto hsv = rgb_to_hsv(p[0], p[1], p[2]);
    float h = hsv[0] + static_cast<float>(dh);
    h -= std::floor(h);
    const float s = std::clamp(hsv[1] * static_cast<float>(ks), 0.0f, 1.0f);
    const float val = std::clamp(hsv[2] * static_cast<float>(kv), 0.0f, 1.0f);
    const auto rgb = hsv_to_rgb(h, s, val);
    for (int c = 0; c < 3; ++c) p[c] = std::clamp(rgb[static_cast<std::size_t>(c)], 0.0f, 1.0f);
  }
}

}  // namespace

SamplePair basic_pipeline(const Manifest& manifest, const ManifestEntry& entry, Rng& rng,
                          const PipelineConfig& config, SourceCache& cache) {
  RasterImage fg = *cache.image(entry.fg_path);
  AlphaMatte alpha = *cache.alpha(entry.alpha_path);
  require_same_shape(fg, alpha, ("foreground/alpha of '" + entry.id + "'").c_str());
  affine_pair(rng, config, fg, alpha);

  if (rng.bernoulli(config.combine_probability)) {
    // Second foreground: uniform over the other distinct foregrounds of the split.
    std::set<std::pair<std::string, std::string>> seen;
    std::vector<const ManifestEntry*> others;
    for (const ManifestEntry* e : manifest.of_split(entry.split)) {
      if (e->fg_path == entry.fg_path) continue;
      if (seen.insert({e->fg_path, e->alpha_path}).second) others.push_back(e);
    }
    if (!others.empty()) {
      const ManifestEntry* other = others[static_cast<std::size_t>(
          rng.uniform_int(0, static_cast<std::int64_t>(others.size()) - 1))];
      RasterImage fg2 = *cache.image(other->fg_path);
      AlphaMatte alpha2 = *cache.alpha(other->alpha_path);
      require_same_shape(fg2, alpha2, ("foreground/alpha of '" + other->id + "'").c_str());
      affine_pair(rng, config, fg2, alpha2);
      fg2 = resize_bilinear(fg2, fg.width(), fg.height());
      alpha2 = resize_bilinear(alpha2, fg.width(), fg.height());
      combine_foregrounds(fg, alpha, fg2, alpha2, fg, alpha);
    }
  }

  const int patch = config.patch_size;
  double scale = rng.uniform(config.resize_min, config.resize_max);
  const int min_side = std::min(fg.width(), fg.height());
  // Never shrink below the patch size.
  scale = std::max(scale, static_cast<double>(patch) / min_side);
  const int rw = std::max(patch, static_cast<int>(std::lround(fg.width() * scale)));
  const int rh = std::max(patch, static_cast<int>(std::lround(fg.height() * scale)));
  fg = resize_bilinear(fg, rw, rh);
  alpha = resize_bilinear(alpha, rw, rh);

  std::vector<std::size_t> band;
  const auto av = alpha.values();
  for (std::size_t i = 0; i < av.size(); ++i) {
    if (in_band(av[i])) band.push_back(i);
  }
  int cx = 0;
  int cy = 0;
  if (!band.empty()) {
    const std::size_t pick = band[static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<std::int64_t>(band.size()) - 1))];
    cx = static_cast<int>(pick % static_cast<std::size_t>(rw));
    cy = static_cast<int>(pick / static_cast<std::size_t>(rw));
  } else {
    cx = static_cast<int>(rng.uniform_int(0, rw - 1));
    cy = static_cast<int>(rng.uniform_int(0, rh - 1));
  }
  const int x0 = std::clamp(cx - patch / 2, 0, rw - patch);
  const int y0 = std::clamp(cy - patch / 2, 0, rh - patch);
  fg = crop(fg, x0, y0, patch, patch);
  alpha = crop(alpha, x0, y0, patch, patch);
  jitter_foreground(rng, config, fg);

  const RasterImage& bg_src = *cache.image(entry.bg_path);
  const double cover = std::max(static_cast<double>(patch) / bg_src.width(),
                                static_cast<double>(patch) / bg_src.height());
  RasterImage bg;
  if (cover > 1.0) {
    const int bw = std::max(patch, static_cast<int>(std::ceil(bg_src.width() * cover)));
    const int bh = std::max(patch, static_cast<int>(std::ceil(bg_src.height() * cover)));
    bg = resize_bilinear(bg_src, bw, bh);
  } else {
    bg = bg_src;
  }
  const int bx = static_cast<int>(rng.uniform_int(0, bg.width() - patch));
  const int by = static_cast<int>(rng.uniform_int(0, bg.height() - patch));
  bg = crop(bg, bx, by, patch, patch);

  SamplePair out;
  out.fg = std::move(fg);
  out.bg = std::move(bg);
  out.alpha = std::move(alpha);
  return out;
}

PatchFactory::PatchFactory(const Manifest& manifest, const EmitOptions& options)
    : manifest_(manifest), options_(options), entries_(manifest.of_split(options.split)) {
  options_.policy.validate();
  options_.pipeline.validate();
  if (entries_.empty()) {
    throw InputError("manifest has no " + std::string(to_string(options.split)) + " entries");
  }
}

std::optional<TrainingPatch> PatchFactory::make(std::uint64_t index, std::string* error) const {
  const std::uint64_t base = derive_seed(options_.seed, index);
  Rng pipeline_rng(derive_seed(base, 1));
  Rng strategy_rng(derive_seed(base, 2));
  Rng trimap_rng(derive_seed(base, 3));
  Rng label_rng(derive_seed(base, 4));
  const ManifestEntry& entry = *entries_[index % entries_.size()];
  try {
    SamplePair sample = basic_pipeline(manifest_, entry, pipeline_rng, options_.pipeline, cache_);
    const StrategyDecision decision = sample_decision(options_.policy, strategy_rng);
    AugmentedSample aug = augment_sample(std::move(sample), decision, strategy_rng);
    int radius = 0;
    Trimap trimap =
        generate_trimap(aug.sample.alpha, trimap_rng, options_.pipeline.train_min_radius,
                        options_.pipeline.train_max_radius, &radius);
    AugmentationRecord& rec = aug.record;
    rec.seed = options_.seed;
    rec.index = index;
    rec.entry_id = entry.id;
    rec.trimap_radius = radius;
    if (rec.pseudo_label_pending) {
      bool ok = false;
      if (options_.labeler) {
        ok = options_.labeler->resolve(aug, trimap, label_rng);
      } else {
        rec.usable = false;
      }
      if (!ok) {
        if (error) *error = "pseudo label unavailable";
        return std::nullopt;
      }
    }
    TrainingPatch patch;
    patch.index = index;
    patch.split = options_.split;
    patch.image = std::move(*aug.sample.composite);
    patch.alpha = std::move(aug.sample.alpha);
    patch.trimap = std::move(trimap);
    patch.fg = std::move(aug.sample.fg);
    patch.bg = std::move(aug.sample.bg);
    patch.record = std::move(rec);
    return patch;
  } catch (const std::exception& e) {
    if (error) *error = e.what();
    return std::nullopt;
  }
}

EmitSummary emit_batch(const Manifest& manifest, const EmitOptions& options,
                       const std::function<void(TrainingPatch&&)>& sink) {
  const PatchFactory factory(manifest, options);
  EmitSummary summary;
  summary.requested = options.count;
  for (Strategy s : {Strategy::kAF, Strategy::kAFB, Strategy::kAC, Strategy::kNone}) {
    summary.strategy_counts[s] = 0;
  }
  struct Outcome {
    std::optional<TrainingPatch> patch;
    std::string error;
  };
  ordered_parallel_map<Outcome>(
      options.count, options.workers,
      [&](std::size_t i) {
        Outcome o;
        o.patch = factory.make(i, &o.error);
        return o;
      },
      [&](std::size_t i, Outcome&& o) {
        if (!o.patch) {
          ++summary.skipped;
          summary.errors.push_back(std::to_string(i) + ": " + o.error);
          log_warning("sample " + std::to_string(i) + " skipped: " + o.error);
          return;
        }
        ++summary.emitted;
        ++summary.strategy_counts[o.patch->record.strategy];
        sink(std::move(*o.patch));
      });
  if (summary.emitted < summary.requested) {
    log_warning("emitted " + std::to_string(summary.emitted) + " of " +
                std::to_string(summary.requested) + " requested patches");
  }
  return summary;
}

std::vector<TrainingPatch> emit_batch(const Manifest& manifest, const EmitOptions& options,
                                      EmitSummary* summary) {
  std::vector<TrainingPatch> out;
  EmitSummary s = emit_batch(manifest, options, [&](TrainingPatch&& p) { out.push_back(std::move(p)); });
  if (summary) *summary = std::move(s);
  return out;
}

void write_patch(const std::filesystem::path& dir, const TrainingPatch& patch) {
  const std::filesystem::path split_dir = dir / std::string(to_string(patch.split));
  std::filesystem::create_directories(split_dir);
  const std::string stem = std::to_string(patch.index);
  write_image_png(split_dir / (stem + "_img.png"), patch.image);
  write_alpha_png(split_dir / (stem + "_alpha.png"), patch.alpha, 16);
  write_trimap_png(split_dir / (stem + "_trimap.png"), patch.trimap);
}

}  // namespace alphakit
